#include "scv/vscv.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"

namespace scv {

namespace {

std::vector<Eigen::Matrix2cd> as_qubit_kraus(const KrausChannel& ch) {
  if (ch.n_in() != 1 || ch.n_out() != 1) throw dimension_error("expected a single-qubit channel");
  std::vector<Eigen::Matrix2cd> out;
  for (const auto& k : ch.kraus_ops()) out.push_back(k);
  return out;
}

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

}  // namespace

std::string RatioEstimate::to_json() const {
  nlohmann::json j{{"seed", seed}, {"shots", shots}, {"a", a}, {"b", b}, {"ratio", ratio},
                   {"variance_a", variance_a}, {"variance_b", variance_b}};
  return j.dump();
}

Matrix virtual_term_apply(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho) {
  const auto& [pi, pj, pk, pl] = t.paulis;
  if (pi.n() != channel.n_in() || rho.rows() != (Eigen::Index{1} << channel.n_in())) {
    throw dimension_error("virtual_term_apply: dimension mismatch");
  }
  const Matrix first = apply_right(apply_left(pk, channel.apply(apply_right(apply_left(pi, rho), pj))), pl);
  const Matrix second = apply_right(apply_left(pl, channel.apply(apply_right(apply_left(pj, rho), pi))), pk);
  return 0.5 * (first + second);
}

Matrix virtual_term_circuit(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho, double p_idle) {
  const auto& [pi, pj, pk, pl] = t.paulis;
  RegisterState st(rho, 1, false);
  st.ancilla_gate(0, hadamard());
  // Branch 0 carries (P_i, P_k) and branch 1 carries (P_j, P_l).
  st.map_system([&](Matrix& x) { x = conjugate(pi, x); });
  st.controlled(0, multiply(pj, pi));
  st.map_system([&](Matrix& x) { x = channel.apply(x); });
  st.ancilla_depolarizing(0, p_idle);
  st.map_system([&](Matrix& x) { x = conjugate(pk, x); });
  st.controlled(0, multiply(pl, pk));
  return st.block(0, 1) + st.block(1, 0);
}

VirtualDecomposition decompose_supermap(const SymmetricOperator& sym) {
  const int n = sym.n();
  const double dim = std::pow(2.0, n);
  std::vector<std::vector<std::pair<cplx, PauliString>>> expansions;
  PauliSet support(n);
  for (const auto& p : sym.projectors()) {
    expansions.push_back(pauli_expansion(p, 1e-12));
    for (const auto& [c, q] : expansions.back()) support.insert(q);
  }
  const auto& ps = support.members();
  const std::size_t K = ps.size(), M = expansions.size();
  std::vector<std::vector<double>> pi(M, std::vector<double>(K, 0.0));
  for (std::size_t a = 0; a < M; ++a) {
    for (const auto& [c, q] : expansions[a]) {
      if (std::abs(c.imag()) > 1e-10) throw std::logic_error("decompose_supermap: complex projector coefficient");
      for (std::size_t i = 0; i < K; ++i)
        if (ps[i].same_up_to_phase(q)) pi[a][i] = c.real();
    }
  }
  bool dyadic = n <= 7;
  std::vector<std::vector<std::int64_t>> num(M, std::vector<std::int64_t>(K, 0));
  for (std::size_t a = 0; a < M && dyadic; ++a) {
    for (std::size_t i = 0; i < K; ++i) {
      const double scaled = pi[a][i] * dim;
      num[a][i] = std::llround(scaled);
      if (std::abs(scaled - static_cast<double>(num[a][i])) > 1e-9) dyadic = false;
    }
  }
  VirtualDecomposition out;
  out.n = n;
  out.denominator = dyadic ? std::llround(std::pow(dim, 4)) : 0;
  std::int64_t gamma_num = 0;
  double gamma = 0.0;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j)
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = 0; l < K; ++l) {
          VirtualTerm t;
          t.paulis = {ps[i], ps[j], ps[k], ps[l]};
          if (dyadic) {
            std::int64_t s = 0;
            for (std::size_t a = 0; a < M; ++a)
              for (std::size_t b = 0; b < M; ++b) s += num[a][i] * num[b][j] * num[a][k] * num[b][l];
            if (s == 0) continue;
            t.numerator = s;
            t.alpha = static_cast<double>(s) / static_cast<double>(out.denominator);
            gamma_num += std::abs(s);
          } else {
            double s = 0;
            for (std::size_t a = 0; a < M; ++a)
              for (std::size_t b = 0; b < M; ++b) s += pi[a][i] * pi[b][j] * pi[a][k] * pi[b][l];
            if (std::abs(s) < 1e-12) continue;
            t.alpha = s;
            gamma += std::abs(s);
          }
          out.terms.push_back(t);
        }
  out.gamma = dyadic ? static_cast<double>(gamma_num) / static_cast<double>(out.denominator) : gamma;
  return out;
}

VirtualDecomposition pauli_commutant_decomposition(const GeneratingSet& gens) {
  const PauliSet group = generated_group(gens);
  VirtualDecomposition out;
  out.n = gens.n();
  const auto g = static_cast<std::int64_t>(group.size());
  out.denominator = g * g;
  for (const auto& qi : group)
    for (const auto& qj : group) {
      VirtualTerm t;
      t.paulis = {qi, qj, qi, qj};
      t.numerator = 1;
      t.alpha = 1.0 / static_cast<double>(out.denominator);
      out.terms.push_back(t);
    }
  out.gamma = static_cast<double>(out.terms.size()) / static_cast<double>(out.denominator);
  return out;
}

Matrix virtual_apply(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& t : decomp.terms) out += t.alpha * virtual_term_apply(t, channel, rho);
  return out;
}

ExactExpectation exact_expectation(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho,
                                   const Matrix& obs) {
  if (!is_hermitian(obs, 1e-10)) throw std::invalid_argument("exact_expectation: observable is not Hermitian");
  if (decomp.terms.empty()) throw std::invalid_argument("exact_expectation: empty decomposition");
  Matrix acc = virtual_apply(decomp, channel, rho) / decomp.gamma;
  ExactExpectation e;
  e.denominator = acc.trace().real();
  e.numerator = (acc * obs).trace().real();
  if (std::abs(e.denominator) < 1e-12) throw degenerate_denominator("exact_expectation: denominator below 1e-12");
  e.ratio = e.numerator / e.denominator;
  return e;
}

RatioEstimate estimate_expectation(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho,
                                   const Matrix& obs, std::size_t shots, std::uint64_t seed) {
  if (decomp.terms.empty()) throw std::invalid_argument("estimate_expectation: empty decomposition");
  if (shots == 0) throw std::invalid_argument("estimate_expectation: shots must be positive");
  if (!is_hermitian(obs, 1e-10)) throw std::invalid_argument("estimate_expectation: observable is not Hermitian");

  struct Branches {
    double p_plus, p_minus;
    double o_plus, o_minus;  // conditional expectations of obs
  };
  std::vector<Branches> cache(decomp.terms.size());
  std::vector<bool> ready(decomp.terms.size(), false);
  std::vector<double> weights;
  for (const auto& t : decomp.terms) weights.push_back(std::abs(t.alpha));

  auto branches = [&](std::size_t idx) -> const Branches& {
    if (!ready[idx]) {
      RegisterState st(rho, 1, false);
      const auto& [pi, pj, pk, pl] = decomp.terms[idx].paulis;
      st.ancilla_gate(0, hadamard());
      st.map_system([&](Matrix& x) { x = conjugate(pi, x); });
      st.controlled(0, multiply(pj, pi));
      st.map_system([&](Matrix& x) { x = channel.apply(x); });
      st.map_system([&](Matrix& x) { x = conjugate(pk, x); });
      st.controlled(0, multiply(pl, pk));
      // Measuring Z after H selects the |±> components of the ancilla.
      Matrix plus = 0.5 * (st.block(0, 0) + st.block(1, 1) + st.block(0, 1) + st.block(1, 0));
      Matrix minus = 0.5 * (st.block(0, 0) + st.block(1, 1) - st.block(0, 1) - st.block(1, 0));
      Branches b;
      b.p_plus = std::max(0.0, plus.trace().real());
      b.p_minus = std::max(0.0, minus.trace().real());
      b.o_plus = b.p_plus > 0 ? (plus * obs).trace().real() / b.p_plus : 0.0;
      b.o_minus = b.p_minus > 0 ? (minus * obs).trace().real() / b.p_minus : 0.0;
      cache[idx] = b;
      ready[idx] = true;
    }
    return cache[idx];
  };

  RatioEstimate est;
  est.seed = seed;
  est.shots = shots;
  est.records.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    Rng rng(seq);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const std::size_t idx = pick(rng);
    const Branches& b = branches(idx);
    const double sgn = sign_of(decomp.terms[idx].alpha);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double as = 0.0, bs = 0.0;
    if (u < b.p_plus) {
      as = sgn;
      bs = sgn * b.o_plus;
    } else if (u < b.p_plus + b.p_minus) {
      as = -sgn;
      bs = -sgn * b.o_minus;
    }
    est.records.emplace_back(as, bs);
  }
  // Pairwise-free deterministic sequential reduction in shot order.
  double sa = 0, sb = 0;
  for (const auto& [as, bs] : est.records) {
    sa += as;
    sb += bs;
  }
  const double N = static_cast<double>(shots);
  est.a = sa / N;
  est.b = sb / N;
  double va = 0, vb = 0;
  for (const auto& [as, bs] : est.records) {
    va += (as - est.a) * (as - est.a);
    vb += (bs - est.b) * (bs - est.b);
  }
  est.variance_a = shots > 1 ? va / (N - 1) : 0.0;
  est.variance_b = shots > 1 ? vb / (N - 1) : 0.0;
  est.ratio = est.a != 0.0 ? est.b / est.a : std::nan("");
  return est;
}

double ancilla_depolarizing_scaling(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho, double p_idle) {
  if (!(p_idle >= 0.0 && p_idle <= 0.75)) throw std::invalid_argument("ancilla_depolarizing_scaling: p_idle outside [0, 3/4]");
  Matrix clean = virtual_term_circuit(t, channel, rho, 0.0);
  Matrix noisy = virtual_term_circuit(t, channel, rho, p_idle);
  const double nn = clean.squaredNorm();
  if (nn < 1e-28) throw degenerate_denominator("ancilla_depolarizing_scaling: noiseless term vanishes");
  return (clean.adjoint() * noisy).trace().real() / nn;
}

IdleDistances mitigate_idling(const KrausChannel& noise_per_step, int L, const KrausChannel& boundary_noise,
                              const Matrix& rho) {
  if (L < 0) throw std::invalid_argument("mitigate_idling: L must be nonnegative");
  const auto anc_noise = as_qubit_kraus(noise_per_step);
  as_qubit_kraus(boundary_noise);
  IdleDistances out;
  if (L == 0) return out;  // no idle window, no gadget

  Matrix raw = rho;
  for (int s = 0; s < L; ++s) raw = noise_per_step.apply(raw);
  out.raw = trace_distance(raw, rho);

  const Matrix start = boundary_noise.apply(rho);
  {
    const auto x = PauliString::from_string("X"), z = PauliString::from_string("Z");
    RegisterState st(start, 2, true);
    st.ancilla_gate(0, hadamard());
    st.ancilla_gate(1, hadamard());
    st.controlled(0, x);
    st.controlled(1, z);
    for (int s = 0; s < L; ++s) {
      st.map_system([&](Matrix& b) { b = noise_per_step.apply(b); });
      st.ancilla_channel(0, anc_noise);
      st.ancilla_channel(1, anc_noise);
    }
    st.controlled(1, z);
    st.controlled(0, x);
    st.ancilla_gate(0, hadamard());
    st.ancilla_gate(1, hadamard());
    Matrix kept = boundary_noise.apply(st.block(0, 0));
    out.scv = trace_distance(kept / kept.trace().real(), rho);
  }
  {
    const auto group = generated_group(1, {PauliString::from_string("X"), PauliString::from_string("Z")});
    Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
    const double w = 1.0 / static_cast<double>(group.size() * group.size());
    for (const auto& qi : group) {
      for (const auto& qj : group) {
        RegisterState st(start, 1, false);
        st.ancilla_gate(0, hadamard());
        st.map_system([&](Matrix& b) { b = conjugate(qi, b); });
        st.controlled(0, multiply(qj, qi));
        for (int s = 0; s < L; ++s) {
          st.map_system([&](Matrix& b) { b = noise_per_step.apply(b); });
          st.ancilla_channel(0, anc_noise);
        }
        st.map_system([&](Matrix& b) { b = conjugate(qi, b); });
        st.controlled(0, multiply(qj, qi));
        acc += w * boundary_noise.apply(st.block(0, 1) + st.block(1, 0));
      }
    }
    out.vscv = trace_distance(acc / acc.trace().real(), rho);
  }
  return out;
}

IdleDistances mitigate_idling(const KrausChannel& noise_per_step, int L, const KrausChannel& boundary_noise) {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  return mitigate_idling(noise_per_step, L, boundary_noise, rho);
}

SharedAncillaReport shared_ancilla_check_joint(const KrausChannel& joint, std::uint64_t seed) {
  if (joint.n_in() != 2 || joint.n_out() != 2) throw dimension_error("shared_ancilla_check: expected two single-qubit systems");
  SharedAncillaReport rep;

  // Product test: E(A ⊗ B) = E1(A) ⊗ E2(B) with E1, E2 the marginal channels.
  const Matrix id = Matrix::Identity(2, 2);
  auto marginal1 = [&](const Matrix& a) { return partial_trace_second(joint.apply(kron(a, id / 2.0)), 1, 1); };
  auto marginal2 = [&](const Matrix& b) { return partial_trace_first(joint.apply(kron(id / 2.0, b)), 1, 1); };
  rep.product_noise = true;
  for (int a = 0; a < 4 && rep.product_noise; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix ea = Matrix::Zero(2, 2), eb = Matrix::Zero(2, 2);
      ea(a / 2, a % 2) = 1.0;
      eb(b / 2, b % 2) = 1.0;
      if ((joint.apply(kron(ea, eb)) - kron(marginal1(ea), marginal2(eb))).norm() > 1e-10) {
        rep.product_noise = false;
        break;
      }
    }

  const std::vector<PauliString> one = {PauliString::from_string("I"), PauliString::from_string("X"),
                                        PauliString::from_string("Y"), PauliString::from_string("Z")};
  auto pair = [](const PauliString& p, const PauliString& q) {
    return PauliString::from_string(p.letters() + q.letters());
  };
  Rng rng(seed);
  rep.proportional = true;
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix r1 = random_density(1, rng), r2 = random_density(1, rng);
    const Matrix input = kron(r1, r2);
    Matrix acc = Matrix::Zero(4, 4);
    for (const auto& i1 : one)
      for (const auto& j1 : one)
        for (const auto& i2 : one)
          for (const auto& j2 : one) {
            VirtualTerm t;
            const PauliString pi = pair(i1, i2), pj = pair(j1, j2);
            t.paulis = {pi, pj, pi, pj};
            acc += virtual_term_circuit(t, joint, input) / 256.0;
          }
    if ((acc - acc.trace().real() * input).norm() > 1e-10) rep.proportional = false;
  }
  return rep;
}

bool shared_ancilla_check(const KrausChannel& noise1, const KrausChannel& noise2) {
  return shared_ancilla_check_joint(tensor(noise1, noise2)).ok();
}

SelectCounts select_model(int M, double p_err, bool vscv_enabled) {
  if (M < 2) throw std::invalid_argument("select_error_model: M must be at least 2");
  if (!(p_err >= 0.0 && p_err <= 1.0)) throw std::invalid_argument("select_error_model: p_err outside [0,1]");
  SelectCounts c;
  c.n = 2 * M * M;
  // One SELECT step per Hamiltonian term: 8M^2 hopping (two directions, XZX and YZY, two spins),
  // M^2 on-site ZZ and 2M^2 single-Z terms.
  c.depth = 11LL * M * M;
  int a = 0;
  while ((1 << a) < c.n) ++a;
  c.ancillas = a;  // index register addressing the n spin orbitals
  const double ancilla_sites = static_cast<double>(c.ancillas) * static_cast<double>(c.depth);
  double sites;
  if (!vscv_enabled) {
    // Every system qubit is exposed at every step, idle or active.
    sites = static_cast<double>(c.n) * static_cast<double>(c.depth) + ancilla_sites;
  } else {
    // Idle windows are purified; each system qubit keeps its active-gate steps and two boundary events.
    constexpr int kActivePerQubit = 8, kBoundary = 2;
    sites = static_cast<double>(c.n) * (kActivePerQubit + kBoundary) + ancilla_sites;
  }
  c.total_error = p_err * sites;
  return c;
}

double select_error_model(int M, double p_err, bool vscv_enabled) {
  return select_model(M, p_err, vscv_enabled).total_error;
}

}  // namespace scv
