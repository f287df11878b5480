#include "scv/scv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace scv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool proportional_to_identity(const Matrix& d, double tol) {
  const cplx c = d.trace() / static_cast<double>(d.rows());
  Matrix r = d;
  r.diagonal().array() -= c;
  return r.norm() <= tol;
}

// tr[P M] without forming P.
cplx pauli_trace(const PauliString& p, const Matrix& m) {
  const std::uint64_t x = p.x_mask();
  cplx t = 0;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    const std::uint64_t src = static_cast<std::uint64_t>(j) ^ x;
    t += p.column_coeff(src) * m(static_cast<Eigen::Index>(src), j);
  }
  return t;
}

Matrix nested_pauli_branch(const std::vector<PauliString>& gens, const Matrix& k, std::uint64_t s) {
  Matrix out = k;
  for (std::size_t t = gens.size(); t-- > 0;) {
    const double sign = ((s >> t) & 1) ? -1.0 : 1.0;
    out = 0.5 * (out + sign * conjugate(gens[t], out));
  }
  return out;
}

std::vector<PauliString> all_paulis_by_weight(int n) {
  if (n > 6) throw std::length_error("find_feedback: at most 6 qubits");
  std::vector<PauliString> out;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z) out.emplace_back(n, x, z, 0);
  std::stable_sort(out.begin(), out.end(), [](const PauliString& a, const PauliString& b) {
    const int wa = weight(a), wb = weight(b);
    return wa != wb ? wa < wb : a.letters() < b.letters();
  });
  return out;
}

}  // namespace

void GadgetNoiseConfig::validate() const {
  for (double r : {gadget_error_rate, ancilla_idle_rate})
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("GadgetNoiseConfig: rate outside [0,1]");
}

FeedbackPolicy FeedbackPolicy::trivial(int n, std::uint64_t outcomes) {
  FeedbackPolicy p;
  p.n = n;
  for (std::uint64_t s = 0; s < outcomes; ++s) p.corrections.emplace(s, PauliString::identity(n));
  return p;
}

const PauliString& FeedbackPolicy::at(std::uint64_t outcome) const {
  auto it = corrections.find(outcome);
  if (it == corrections.end()) {
    throw std::invalid_argument("FeedbackPolicy: no correction for outcome " + std::to_string(outcome));
  }
  return it->second;
}

int gadget_qubits(const GadgetSpec& spec) {
  return std::visit(overloaded{[](const SymmetricOperator& s) { return s.ancillas(); },
                               [](const GeneratingSet& g) { return static_cast<int>(g.size()); }},
                    spec);
}

int gadget_n(const GadgetSpec& spec) {
  return std::visit([](const auto& s) { return s.n(); }, spec);
}

std::uint64_t gadget_outcomes(const GadgetSpec& spec) { return std::uint64_t{1} << gadget_qubits(spec); }

Supermap Supermap::identity(int n) {
  return Supermap(n, [](const KrausChannel& e) { return e; });
}

KrausChannel Supermap::operator()(const KrausChannel& e) const {
  if (e.n_in() != n_ || e.n_out() != n_) throw dimension_error("Supermap: channel dimension mismatch");
  return f_(e);
}

Supermap detection_supermap(const SymmetricOperator& sym) {
  return Supermap(sym.n(), [sym](const KrausChannel& e) { return block_decompose(sym, e); });
}

Supermap detection_supermap(const PauliString& q) {
  return Supermap(q.n(), [q](const KrausChannel& e) {
    std::vector<Matrix> ks;
    for (const auto& k : e.kraus_ops()) {
      Matrix out = 0.5 * (k + conjugate(q.phaseless(), k));
      if (out.norm() >= kKrausPrune) ks.push_back(std::move(out));
    }
    return KrausChannel(e.n_in(), e.n_out(), std::move(ks));
  });
}

Supermap concatenate(const Supermap& outer, const Supermap& inner) {
  if (outer.n() != inner.n()) throw dimension_error("concatenate: supermap dimensions differ");
  return Supermap(outer.n(), [outer, inner](const KrausChannel& e) { return outer(inner(e)); });
}

DetectionResult scv_detect(const SymmetricOperator& sym, const KrausChannel& noisy) {
  return {TraceNonIncreasingMap(block_decompose(sym, noisy))};
}

DetectionResult scv_detect_pauli(const GeneratingSet& gens, const KrausChannel& noisy) {
  if (gens.n() != noisy.n_in()) throw dimension_error("scv_detect_pauli: dimension mismatch");
  Supermap s = Supermap::identity(gens.n());
  for (const auto& q : gens.generators()) s = concatenate(s, detection_supermap(q));
  return {TraceNonIncreasingMap(s(noisy))};
}

GadgetRun run_gadget(const GadgetSpec& spec, const Matrix& x, const std::function<void(Matrix&)>& channel,
                     const GadgetNoiseConfig& cfg, bool hermitian) {
  cfg.validate();
  const int n = gadget_n(spec);
  const int m = gadget_qubits(spec);
  const bool is_pauli = std::holds_alternative<GeneratingSet>(spec);
  if (cfg.flags_enabled && !is_pauli) throw std::invalid_argument("run_gadget: flags require a Pauli gadget");
  const int flags = cfg.flags_enabled ? m : 0;
  require_qubits(n + m + flags, "run_gadget");

  GadgetRun run{RegisterState(x, m + flags, hermitian), 0};
  RegisterState& st = run.state;
  const auto h = hadamard();

  std::vector<Matrix> powers;
  if (!is_pauli) {
    Matrix v = build_v_s(std::get<SymmetricOperator>(spec)).v;
    for (int k = 0; k < m; ++k) {
      powers.push_back(v);
      v = v * v;
    }
  }
  const auto* gens = is_pauli ? &std::get<GeneratingSet>(spec).generators() : nullptr;

  auto gadget_noise = [&] {
    if (cfg.gadget_error_rate == 0.0) return;
    st.map_system([&](Matrix& b) { apply_local_depolarizing(b, n, cfg.gadget_error_rate); });
    for (int k = 0; k < m; ++k) st.ancilla_depolarizing(k, cfg.gadget_error_rate);
  };
  auto flag_coupling = [&] {
    std::vector<cplx> phases(static_cast<std::size_t>(st.reg_dim()));
    for (Eigen::Index a = 0; a < st.reg_dim(); ++a) {
      int parity = 0;
      for (int k = 0; k < m; ++k) parity ^= static_cast<int>(((a >> k) & 1) & ((a >> (m + k)) & 1));
      phases[a] = parity ? -1.0 : 1.0;
    }
    st.ancilla_diagonal(phases);
  };

  for (int k = 0; k < m; ++k) st.ancilla_gate(k, h);
  for (int k = 0; k < m; ++k) {
    if (is_pauli) st.controlled(k, (*gens)[k]);
    else st.controlled(k, powers[k]);
  }
  gadget_noise();
  if (flags) {
    for (int k = 0; k < m; ++k) st.ancilla_gate(m + k, h);
    flag_coupling();
  }
  if (cfg.ancilla_idle_rate > 0.0)
    for (int k = 0; k < m + flags; ++k) st.ancilla_depolarizing(k, cfg.ancilla_idle_rate);
  st.map_system(channel);
  if (flags) {
    flag_coupling();
    for (int k = 0; k < m; ++k) st.ancilla_gate(m + k, h);
  }
  gadget_noise();
  for (int k = m; k-- > 0;) {
    if (is_pauli) st.controlled(k, (*gens)[k]);
    else st.controlled(k, Matrix(powers[k].adjoint()));
  }
  if (is_pauli) {
    for (int k = 0; k < m; ++k) st.ancilla_gate(k, h);
  } else if (m > 0) {
    st.ancilla_unitary(inverse_qft(m));
  }
  return run;
}

KrausChannel channel_from_map(int n, const std::function<Matrix(const Matrix&)>& f) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix j = Matrix::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      Matrix e = Matrix::Zero(d, d);
      e(a, b) = 1.0;
      j.block(a * d, b * d, d, d) = f(e);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (j + j.adjoint()));
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<Matrix> ks;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= 1e-14 * std::max(1.0, top)) continue;
    Matrix k(d, d);
    for (Eigen::Index c = 0; c < d; ++c) k.col(c) = std::sqrt(lam) * es.eigenvectors().col(i).segment(c * d, d);
    ks.push_back(std::move(k));
  }
  return KrausChannel(n, n, std::move(ks));
}

DetectionResult scv_detect_circuit(const GadgetSpec& spec, const KrausChannel& noisy, const GadgetNoiseConfig& cfg) {
  const int n = gadget_n(spec);
  if (noisy.n_in() != n || noisy.n_out() != n) throw dimension_error("scv_detect_circuit: dimension mismatch");
  auto ch = [&](Matrix& b) { b = noisy.apply(b); };
  KrausChannel out = channel_from_map(n, [&](const Matrix& x) {
    GadgetRun run = run_gadget(spec, x, ch, cfg, false);
    return run.state.block(run.accept, run.accept);
  });
  return {TraceNonIncreasingMap(std::move(out))};
}

std::vector<Matrix> branch_kraus(const GadgetSpec& spec, const Matrix& k, std::uint64_t outcome) {
  if (outcome >= gadget_outcomes(spec)) throw std::out_of_range("branch_kraus: outcome out of range");
  return std::visit(
      overloaded{[&](const SymmetricOperator& sym) {
                   const auto& ps = sym.projectors();
                   const std::int64_t r = std::int64_t{1} << sym.ancillas();
                   Matrix out = Matrix::Zero(k.rows(), k.cols());
                   for (std::int64_t j = 0; j < static_cast<std::int64_t>(ps.size()); ++j) {
                     const std::int64_t i = ((j - static_cast<std::int64_t>(outcome)) % r + r) % r;
                     if (i < static_cast<std::int64_t>(ps.size())) out.noalias() += ps[i] * k * ps[j];
                   }
                   return std::vector<Matrix>{out};
                 },
                 [&](const GeneratingSet& g) {
                   return std::vector<Matrix>{nested_pauli_branch(g.generators(), k, outcome)};
                 }},
      spec);
}

KrausChannel scv_correct(const GadgetSpec& spec, const KrausChannel& noisy, const FeedbackPolicy& policy) {
  const int n = gadget_n(spec);
  if (noisy.n_in() != n || noisy.n_out() != n) throw dimension_error("scv_correct: dimension mismatch");
  std::vector<Matrix> ks;
  for (std::uint64_t s = 0; s < gadget_outcomes(spec); ++s) {
    const PauliString& c = policy.at(s);
    for (const auto& k : noisy.kraus_ops()) {
      for (auto& b : branch_kraus(spec, k, s)) {
        if (b.norm() < kKrausPrune) continue;
        ks.push_back(apply_left(c, b));
      }
    }
  }
  return KrausChannel(n, n, std::move(ks));
}

std::optional<FeedbackPolicy> find_feedback(const GadgetSpec& spec, const KrausChannel& noisy, const Matrix& ideal) {
  const int n = gadget_n(spec);
  if (noisy.n_in() != n || ideal.rows() != (Eigen::Index{1} << n)) throw dimension_error("find_feedback: dimension mismatch");
  const auto candidates = all_paulis_by_weight(n);
  const Matrix ideal_dag = ideal.adjoint();
  const double d = static_cast<double>(ideal.rows());
  FeedbackPolicy policy;
  policy.n = n;
  for (std::uint64_t s = 0; s < gadget_outcomes(spec); ++s) {
    std::vector<Matrix> rel;  // branch Kraus times U^dagger
    for (const auto& k : noisy.kraus_ops())
      for (auto& b : branch_kraus(spec, k, s))
        if (b.norm() >= kKrausPrune) rel.push_back(b * ideal_dag);
    if (rel.empty()) {
      policy.corrections.emplace(s, PauliString::identity(n));
      continue;
    }
    const PauliString* found = nullptr;
    for (const auto& c : candidates) {
      bool ok = true;
      for (const auto& mb : rel) {
        const cplx proj = pauli_trace(c, mb) / d;
        const double resid = mb.squaredNorm() - d * std::norm(proj);
        if (resid > 1e-20 + 1e-12 * mb.squaredNorm()) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = &c;
        break;
      }
    }
    if (!found) return std::nullopt;
    policy.corrections.emplace(s, *found);
  }
  KrausChannel corrected = scv_correct(spec, noisy, policy);
  if (choi_distance(corrected, KrausChannel::unitary(ideal)) > 1e-9) return std::nullopt;
  return policy;
}

bool theorem1_condition(const KrausChannel& noise, const SymmetricOperator& sym, double tol) {
  if (noise.n_in() != sym.n()) throw dimension_error("theorem1_condition: dimension mismatch");
  for (const auto& k : noise.kraus_ops()) {
    Matrix d = Matrix::Zero(k.rows(), k.cols());
    for (const auto& p : sym.projectors()) d.noalias() += p * k * p;
    if (!proportional_to_identity(d, tol)) return false;
  }
  return true;
}

bool theorem3prime_condition(const KrausChannel& noise, const SymmetricOperator& sym, double tol) {
  if (noise.n_in() != sym.n()) throw dimension_error("theorem3prime_condition: dimension mismatch");
  const auto& ks = noise.kraus_ops();
  for (std::size_t a = 0; a < ks.size(); ++a) {
    for (std::size_t b = 0; b < ks.size(); ++b) {
      Matrix prod = ks[a].adjoint() * ks[b];
      Matrix d = Matrix::Zero(prod.rows(), prod.cols());
      for (const auto& p : sym.projectors()) d.noalias() += p * prod * p;
      if (!proportional_to_identity(d, tol)) return false;
    }
  }
  return true;
}

bool detectable(const PauliString& p, const GeneratingSet& gens) {
  return std::any_of(gens.generators().begin(), gens.generators().end(),
                     [&](const PauliString& g) { return !commutes(p, g); });
}

PauliSet correction_products(const PauliSet& noise_paulis) {
  const int n = noise_paulis.n();
  std::vector<PauliString> ps{PauliString::identity(n)};
  for (const auto& p : noise_paulis) ps.push_back(p);
  PauliSet out(n);
  for (const auto& a : ps)
    for (const auto& b : ps) {
      PauliString prod = multiply(a, b);
      if (!prod.is_identity()) out.insert(prod);
    }
  return out;
}

bool correctable_set(const PauliSet& noise_paulis, const PauliSet& q_u) {
  return correction_products(noise_paulis).intersect(q_u).empty();
}

}  // namespace scv

namespace scv {

namespace {

// Pauli letters are indexed I, X, Y, Z; the code below maps them to XOR-able (x, z) bits.
constexpr std::array<int, 4> kLetterCode{0, 1, 3, 2};
constexpr std::array<int, 4> kCodeLetter{0, 1, 3, 2};

std::array<double, 4> depolarizing_probs(double p) { return {1.0 - p, p / 3.0, p / 3.0, p / 3.0}; }

std::array<double, 4> compose_pauli(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[kCodeLetter[kLetterCode[i] ^ kLetterCode[j]]] += a[i] * b[j];
  return out;
}

int letter_index(char c) {
  switch (c) {
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: return 0;
  }
}

std::array<double, 4> signed_weights(const std::array<double, 4>& w, int letter) {
  std::array<double, 4> out = w;
  if (letter == 0) return out;
  for (int a = 1; a < 4; ++a)
    if (a != letter) out[a] = -out[a];
  return out;
}

}  // namespace

PauliFrameGadget::PauliFrameGadget(const GeneratingSet& gens, const Matrix& u, const std::array<double, 4>& layer_noise,
                                   const GadgetNoiseConfig& cfg)
    : n_(gens.n()), u_(u) {
  cfg.validate();
  if (cfg.flags_enabled) throw std::invalid_argument("PauliFrameGadget: flags are not supported");
  if (u.rows() != (Eigen::Index{1} << n_)) throw dimension_error("PauliFrameGadget: unitary dimension mismatch");
  const auto& qs = gens.generators();
  for (const auto& q : qs) {
    if ((apply_left(q, u) - apply_right(u, q)).norm() > 1e-9 * std::max(1.0, u.norm())) {
      throw std::invalid_argument("PauliFrameGadget: unitary does not commute with generator " + q.letters());
    }
  }
  const int m = static_cast<int>(qs.size());
  if (m > 10) throw std::invalid_argument("PauliFrameGadget: too many generators");
  const std::size_t r = std::size_t{1} << m;
  const double inv_r = 1.0 / static_cast<double>(r);

  // Q^a = Q_{m-1}^{a_{m-1}} ... Q_0^{a_0}, matching the encoding order of run_gadget.
  frame_.reserve(r);
  for (std::size_t a = 0; a < r; ++a) {
    PauliString p = PauliString::identity(n_);
    for (int k = 0; k < m; ++k)
      if ((a >> k) & 1) p = multiply(qs[k], p);
    frame_.push_back(p);
  }
  characters_ = frame_;

  // Sign phi(a, w) with Q^{a xor w} = phi(a, w) Q^a Q^w.
  auto phi = [&](std::size_t a, std::size_t w) {
    const PauliString prod = multiply(frame_[a], frame_[w]);
    const int d = ((prod.phase() - frame_[a ^ w].phase()) % 4 + 4) % 4;
    if (d % 2) throw std::logic_error("PauliFrameGadget: non-real reordering phase");
    return d == 0 ? 1.0 : -1.0;
  };
  auto parity = [](std::size_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; };

  // hhat[w][b]: Walsh transform of the squared decoding amplitude for frame shift w.
  std::vector<std::vector<double>> hhat(r, std::vector<double>(r, 0.0));
  for (std::size_t w = 0; w < r; ++w) {
    std::vector<double> h(r);
    for (std::size_t x = 0; x < r; ++x) {
      double c = 0.0;
      for (std::size_t a = 0; a < r; ++a) c += parity(x & a) * phi(a, w);
      h[x] = (c * inv_r) * (c * inv_r);
    }
    for (std::size_t b = 0; b < r; ++b) {
      double s = 0.0;
      for (std::size_t x = 0; x < r; ++x) s += h[x] * parity(b & x);
      hhat[w][b] = s * inv_r;
    }
  }

  // Per-ancilla joint law of (frame bit, syndrome flip) from faults before and after the channel.
  const auto pre = compose_pauli(depolarizing_probs(cfg.gadget_error_rate), depolarizing_probs(cfg.ancilla_idle_rate));
  const auto post = depolarizing_probs(cfg.gadget_error_rate);
  double law[2][2] = {{0, 0}, {0, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int c = kLetterCode[i] ^ kLetterCode[j];
      law[c & 1][(c >> 1) & 1] += pre[i] * post[j];
    }
  double ancilla_factor[2][2];  // [b_k][w_k]
  for (int bk = 0; bk < 2; ++bk)
    for (int wk = 0; wk < 2; ++wk) ancilla_factor[bk][wk] = law[wk][0] + (bk ? -1.0 : 1.0) * law[wk][1];

  weight_.assign(r, std::vector<double>(r, 0.0));
  for (std::size_t b = 0; b < r; ++b)
    for (std::size_t w = 0; w < r; ++w) {
      double f = hhat[w][b];
      for (int k = 0; k < m; ++k) f *= ancilla_factor[(b >> k) & 1][(w >> k) & 1];
      weight_[b][w] = f;
    }

  before_ = depolarizing_probs(cfg.gadget_error_rate);
  after_ = compose_pauli(layer_noise, depolarizing_probs(cfg.gadget_error_rate));
}

Matrix PauliFrameGadget::character_term(const Matrix& rho, std::size_t b) const {
  Matrix x = Matrix::Zero(rho.rows(), rho.cols());
  bool any = false;
  for (std::size_t w = 0; w < frame_.size(); ++w) {
    const double c = weight_[b][w];
    if (c == 0.0) continue;
    any = true;
    x += c * (w == 0 ? rho : conjugate(frame_[w], rho));
  }
  if (!any) return x;
  const PauliString& g = characters_[b];
  for (int q = 0; q < n_; ++q) apply_pauli_qubit(x, n_, q, signed_weights(before_, letter_index(g.factor(q))));
  x = u_ * x * u_.adjoint();
  for (int q = 0; q < n_; ++q) apply_pauli_qubit(x, n_, q, signed_weights(after_, letter_index(g.factor(q))));
  return x;
}

Matrix PauliFrameGadget::apply(const Matrix& rho) const { return apply_branch(rho, 0); }

Matrix PauliFrameGadget::apply_branch(const Matrix& rho, std::uint64_t outcome) const {
  if (rho.rows() != u_.rows()) throw dimension_error("PauliFrameGadget: dimension mismatch");
  if (outcome >= characters_.size()) throw std::out_of_range("PauliFrameGadget: outcome out of range");
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t b = 0; b < characters_.size(); ++b) {
    const double sign = (std::popcount(b & outcome) & 1) ? -1.0 : 1.0;
    out += sign * character_term(rho, b);
  }
  return out;
}

Matrix PauliFrameGadget::apply_corrected(const Matrix& rho, const FeedbackPolicy& policy) const {
  if (rho.rows() != u_.rows()) throw dimension_error("PauliFrameGadget: dimension mismatch");
  std::vector<Matrix> terms;
  terms.reserve(characters_.size());
  for (std::size_t b = 0; b < characters_.size(); ++b) terms.push_back(character_term(rho, b));
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::uint64_t s = 0; s < characters_.size(); ++s) {
    Matrix branch = Matrix::Zero(rho.rows(), rho.cols());
    for (std::size_t b = 0; b < terms.size(); ++b) branch += ((std::popcount(b & s) & 1) ? -1.0 : 1.0) * terms[b];
    out += conjugate(policy.at(s), branch);
  }
  return out;
}

}  // namespace scv
