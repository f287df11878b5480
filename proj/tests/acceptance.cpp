#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "scv/clifford_limits.hpp"
#include "scv/experiments.hpp"

using namespace scv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

KrausChannel with_unitary(const std::vector<Matrix>& noise, const Matrix& u) {
  std::vector<Matrix> ks;
  for (const auto& k : noise) ks.push_back(k * u);
  const int n = qubits_of(u.rows());
  return KrausChannel(n, n, ks);
}

double choi_state_gap(int n, const std::function<Matrix(const Matrix&)>& a, const std::function<Matrix(const Matrix&)>& b) {
  const double d = std::pow(2.0, n);
  return (oracle::choi_of_map(n, a) - oracle::choi_of_map(n, b)).norm() / d;
}

Outcome theorem1_equivalence() {
  Rng rng(101);
  int agree = 0, positives = 0, lambda_ok = 0, total = 200;
  const std::vector<std::vector<int>> shapes{{1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4, 2, 2}, {3, 3, 2}, {4, 4}};
  for (int t = 0; t < total; ++t) {
    const auto& shape = shapes[static_cast<std::size_t>(t) % shapes.size()];
    int dim = 0;
    for (int m : shape) dim += m;
    const int n = qubits_of(dim);
    const auto projs = oracle::random_projectors(n, shape, rng);
    Matrix s = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < projs.size(); ++i) s += static_cast<double>(i) * projs[i];
    const SymmetricOperator sym = eigenspace_projectors(s);
    const Matrix u = oracle::random_block_unitary(projs, rng);
    const bool structured = (t / static_cast<int>(shapes.size())) % 2 == 0;
    std::vector<Matrix> noise;
    for (int k = 0; k < 3; ++k) {
      Matrix off = Matrix::Zero(dim, dim);
      const Matrix r = oracle::random_hermitian(dim, rng);
      for (std::size_t i = 0; i < projs.size(); ++i)
        for (std::size_t j = 0; j < projs.size(); ++j)
          if (i != j || !structured) off += projs[i] * r * projs[j];
      noise.push_back(0.3 * Matrix::Identity(dim, dim) + 0.05 * off);
    }
    const KrausChannel noisy = with_unitary(noise, u);
    const bool cond = theorem1_condition(KrausChannel(n, n, noise), sym);
    const auto lam = proportionality(scv_detect(sym, noisy).purified.inner(), KrausChannel::unitary(u));
    agree += cond == lam.has_value();
    positives += cond;
    if (lam) {
      const Matrix rho = random_density(n, rng);
      const double kept = oracle::projector_detect(projs, noisy.kraus_ops(), rho).trace().real();
      lambda_ok += std::abs(*lam - kept) <= 1e-9;
    } else {
      lambda_ok += 1;
    }
  }
  std::ostringstream d;
  d << "agree " << agree << "/" << total << ", proportional " << positives << ", lambda ok " << lambda_ok << "/" << total;
  return {agree == total && lambda_ok == total && positives > 0 && positives < total, d.str()};
}

Outcome corollary1_exhaustive() {
  const HamiltonianSpec h = build_heisenberg(4);
  const GeneratingSet gens = commutant(h.term_set());
  std::vector<std::string> terms;
  for (const auto& p : h.term_set()) terms.push_back(p.letters());
  std::set<std::string> got;
  for (const auto& g : generated_group(gens)) got.insert(g.letters());
  bool ok = got == oracle::commutant(terms);
  const Matrix u = expi_hermitian(h.matrix(), 0.9);
  int weight1 = 0, neighbours = 0, matches = 0, total = 0;
  for (const auto& s : oracle::all_paulis(4)) {
    if (oracle::weight(s) == 0) continue;
    ++total;
    const PauliString p = PauliString::from_string(s);
    const bool set_verdict = detectable(p, gens);
    const KrausChannel noisy = with_unitary({std::sqrt(0.9) * Matrix::Identity(16, 16), std::sqrt(0.1) * oracle::pauli(s)}, u);
    const bool channel_verdict =
        proportionality(scv_detect_pauli(gens, noisy).purified.inner(), KrausChannel::unitary(u)).has_value();
    matches += set_verdict == channel_verdict;
    if (oracle::weight(s) == 1) weight1 += set_verdict;
  }
  for (int i = 0; i < 3; ++i)
    for (char c : {'X', 'Y', 'Z'})
      neighbours += !detectable(multiply(PauliString::single(4, i, c), PauliString::single(4, i + 1, c)), gens);
  ok = ok && weight1 == 12 && neighbours == 9 && matches == total;
  std::ostringstream d;
  d << "weight-1 detectable " << weight1 << "/12, neighbour pairs undetectable " << neighbours << "/9, set==channel "
    << matches << "/" << total;
  return {ok, d.str()};
}

Outcome fig3a_scaling() {
  const ExperimentConfig c = ExperimentConfig::parse(
      "experiment = heisenberg\nn = 8\ntheta = 2pi\nlayers = 100\np_err = 1e-5, 3e-5, 1e-4, 3e-4, 1e-3\n"
      "modes = raw, SCV_whole\nnoiseless_gadget = true\n");
  const SweepResult r = run_experiment(c);
  const double raw = loglog_slope(r.series("raw", "trace_distance"));
  const double scv = loglog_slope(r.series("SCV_whole", "trace_distance"));
  return {std::abs(raw - 1.0) <= 0.15 && std::abs(scv - 2.0) <= 0.2,
          fmt("raw slope %.4f", raw) + fmt(", SCV_whole slope %.4f", scv)};
}

Outcome virtual_reconstruction() {
  Rng rng(104);
  const SymmetricOperator sum_z =
      eigenspace_projectors(PauliString::from_string("ZI").to_matrix() + PauliString::from_string("IZ").to_matrix());
  const std::vector<SymmetricOperator> syms{pauli_symmetry(PauliString::from_string("Z")),
                                            pauli_symmetry(PauliString::from_string("ZZ")), sum_z};
  double worst = 0.0;
  for (const auto& sym : syms) {
    const VirtualDecomposition d = decompose_supermap(sym);
    for (int t = 0; t < 30; ++t) {
      const auto ks = oracle::random_channel(sym.n(), 1 + t % 4, rng);
      const KrausChannel ch(sym.n(), sym.n(), ks);
      worst = std::max(worst, choi_state_gap(
                                  sym.n(), [&](const Matrix& x) { return virtual_apply(d, ch, x); },
                                  [&](const Matrix& x) { return oracle::projector_detect(sym.projectors(), ks, x); }));
    }
  }
  bool gamma_one = true;
  const std::vector<GeneratingSet> pauli_gadgets{
      GeneratingSet(1, {PauliString::from_string("Z")}),
      GeneratingSet(2, {PauliString::from_string("XX"), PauliString::from_string("ZZ")}),
      commutant(build_heisenberg(4).term_set()), commutant(build_code_hamiltonian("5_1_3").term_set())};
  for (const auto& g : pauli_gadgets) gamma_one = gamma_one && pauli_commutant_decomposition(g).gamma == 1.0;
  return {worst <= 1e-9 && gamma_one, fmt("max Choi distance %.3e", worst) + (gamma_one ? ", gamma = 1" : ", gamma != 1")};
}

Outcome ancilla_factor() {
  Rng rng(105);
  double worst = 0.0;
  for (double p : {0.0, 0.1, 0.3, 0.75}) {
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + t % 2;
      const auto ks = oracle::random_channel(n, 2, rng);
      const KrausChannel ch(n, n, ks);
      const auto all = oracle::all_paulis(n);
      std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
      VirtualTerm term;
      for (auto& q : term.paulis) q = PauliString::from_string(all[pick(rng)]);
      const Matrix rho = random_density(n, rng);
      const double expect = 1.0 - 4.0 * p / 3.0;
      const Matrix clean = virtual_term_circuit(term, ch, rho, 0.0);
      const Matrix noisy = virtual_term_circuit(term, ch, rho, p);
      worst = std::max(worst, (noisy - expect * clean).norm());
      if (clean.norm() > 1e-6) worst = std::max(worst, std::abs(ancilla_depolarizing_scaling(term, ch, rho, p) - expect));
    }
  }
  return {worst <= 1e-12, fmt("max deviation %.3e", worst)};
}

Outcome idling() {
  const double p = 1e-7;
  const KrausChannel step = single_qubit_depolarizing(p);
  std::vector<IdleDistances> ds;
  for (int l : {10, 100, 1000}) ds.push_back(mitigate_idling(step, l, step));
  double lo = ds[0].vscv, hi = ds[0].vscv;
  for (const auto& d : ds) lo = std::min(lo, d.vscv), hi = std::max(hi, d.vscv);
  const double c = 1.0 - 4.0 * p / 3.0;
  const double boundary = (1.0 - c * c) / 2.0;
  const double gap = std::abs(ds[0].vscv - boundary);
  double raw_dev = 0.0;
  const int ls[] = {10, 100, 1000};
  for (std::size_t i = 0; i < 3; ++i)
    raw_dev = std::max(raw_dev, std::abs(ds[i].raw / (ls[i] * 2.0 * p / 3.0) - 1.0));
  std::ostringstream d;
  d << fmt("VSCV spread %.2e", hi - lo) << fmt(", |VSCV - two-boundary| %.2e", gap)
    << fmt(", raw/L relative deviation %.2e", raw_dev);
  return {hi - lo < 1e-12 && gap < 1e-12 && raw_dev < 1e-3, d.str()};
}

Outcome select_scaling() {
  std::vector<std::pair<double, double>> raw, vs;
  for (int m = 2; m <= 12; ++m) {
    const SelectCounts r = select_model(m, 1e-7, false), v = select_model(m, 1e-7, true);
    raw.emplace_back(r.n, r.total_error);
    vs.emplace_back(v.n, v.total_error / std::log2(static_cast<double>(v.n)));
  }
  const double a = loglog_slope(raw), b = loglog_slope(vs);
  return {std::abs(a - 2.0) <= 0.1 && std::abs(b - 1.0) <= 0.15,
          fmt("raw slope %.4f", a) + fmt(", VSCV slope (log factor removed) %.4f", b)};
}

Outcome correction() {
  const double theta = 0.9, p = 0.15;
  const Matrix rz = expi_hermitian(PauliString::from_string("Z").to_matrix(), -theta / 2);
  const KrausChannel noisy = with_unitary({std::sqrt(1 - p) * oracle::pauli("I"), std::sqrt(p) * oracle::pauli("X")}, rz);
  const GeneratingSet z(1, {PauliString::from_string("Z")});
  const auto pol = find_feedback(z, noisy, rz);
  const double dist = pol ? choi_distance(scv_correct(z, noisy, *pol), KrausChannel::unitary(rz)) : 1.0;

  Rng rng(108);
  const HamiltonianSpec code = build_code_hamiltonian("5_1_3");
  const Matrix uc = expi_hermitian(code.matrix(), 0.6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> w(16);
  double tot = 0.0;
  for (auto& x : w) tot += x = uni(rng);
  std::vector<Matrix> cn{std::sqrt(w[0] / tot) * Matrix::Identity(32, 32)};
  std::size_t idx = 1;
  for (int q = 0; q < 5; ++q)
    for (char c : {'X', 'Y', 'Z'}) cn.push_back(std::sqrt(w[idx++] / tot) * PauliString::single(5, q, c).to_matrix());
  const bool code_ok = find_feedback(commutant(code.term_set()), with_unitary(cn, uc), uc).has_value();

  const HamiltonianSpec heis = build_heisenberg(4);
  const Matrix uh = expi_hermitian(heis.matrix(), 0.6);
  const KrausChannel hn = with_unitary(
      {std::sqrt(0.8) * Matrix::Identity(16, 16), std::sqrt(0.1) * oracle::pauli("XIII"), std::sqrt(0.1) * oracle::pauli("IXII")},
      uh);
  const bool heis_none = !find_feedback(commutant(heis.term_set()), hn, uh).has_value();
  std::ostringstream d;
  d << fmt("Rz Choi distance %.2e", dist) << ", code policy " << (code_ok ? "found" : "missing")
    << ", Heisenberg {X1,X2} policy " << (heis_none ? "absent" : "found");
  return {pol.has_value() && dist <= 1e-10 && code_ok && heis_none, d.str()};
}

Outcome resource_forms() {
  double closed_gap = 0.0, printed_gap = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const SingleQubitXYState s{std::numbers::pi / 4 * i / 49, 0.5 * j / 49};
      closed_gap = std::max(closed_gap, std::abs(robustness_closed(s).value - robustness_bruteforce(s).value));
      closed_gap = std::max(closed_gap, std::abs(weight_closed(s).value - weight_bruteforce(s).value));
      printed_gap = std::max(printed_gap, std::abs(robustness_main_text(s) - robustness_closed(s).value));
    }
  return {closed_gap <= 1e-6 && printed_gap <= 1e-12,
          fmt("closed vs brute force %.2e", closed_gap) + fmt(", printed formulas %.2e", printed_gap)};
}

Outcome saturation() {
  const BoundReport r = saturation_check(std::numbers::pi / 4, 0.9, 0.05, 0.03, 0.02);
  const double bound = std::min(r.robustness_bound, r.weight_bound);
  const bool residual_ok = r.residual_distance <= 1e-10;
  const bool fid_ok = std::abs(r.achieved_fidelity - 0.95) <= 1e-9;
  const bool bound_ok = std::abs(bound - 0.95) <= 1e-9;
  std::ostringstream d;
  d << fmt("residual %.2e", r.residual_distance) << fmt(", fidelity %.9f", r.achieved_fidelity)
    << fmt(", robustness bound %.9f", r.robustness_bound) << fmt(", weight bound %.9f", r.weight_bound);
  if (!bound_ok) d << "; the closed-form bounds at this point exceed 0.95, so bound = 0.95 cannot hold";
  return {residual_ok && fid_ok && bound_ok, d.str()};
}

Outcome saturation_in_region() {
  const BoundReport r = saturation_check(std::numbers::pi / 4, 0.9, 0.08, 0.01, 0.01);
  const double bound = std::min(r.robustness_bound, r.weight_bound);
  return {r.residual_distance <= 1e-10 && std::abs(r.achieved_fidelity - 0.98) <= 1e-9 && std::abs(bound - 0.98) <= 1e-9,
          "p=(0.9,0.08,0.01,0.01): " + fmt("fidelity %.9f", r.achieved_fidelity) + fmt(", bound %.9f", bound)};
}

Outcome overhead_trend() {
  double worst = 0.0;
  for (double p : {0.001, 0.005, 0.01})
    for (int l : {1, 10, 50, 100}) {
      const double o = layerwise_detect_overhead(4, l, p, 11);
      worst = std::max(worst, std::abs(o * std::pow(1.0 - p, l) - 1.0));
    }
  return {worst <= 0.05, fmt("max relative deviation from (1-p)^-L %.2e", worst)};
}

std::set<int> parse_ids(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string allow, only;
  app.add_option("--allow-fail", allow, "Comma-separated criteria whose failure does not change the exit code");
  app.add_option("--only", only, "Comma-separated criteria to run");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> allowed = parse_ids(allow), selected = parse_ids(only);

  const std::vector<Criterion> criteria{
      {1, "theorem-1 oracle equivalence", 30, theorem1_equivalence},
      {2, "corollary-1 exhaustive check", 120, corollary1_exhaustive},
      {3, "whole-circuit SCV scaling", 600, fig3a_scaling},
      {4, "virtual decomposition reconstruction", 60, virtual_reconstruction},
      {5, "ancilla depolarizing factor", 10, ancilla_factor},
      {6, "idling mitigation", 60, idling},
      {7, "SELECT scaling", 5, select_scaling},
      {8, "feedback correction", 300, correction},
      {9, "resource closed forms", 120, resource_forms},
      {10, "saturation at the stated point", 30, saturation},
      {11, "sampling-overhead trend", 60, overhead_trend},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %2d %s  %s: %s [%.1f s of %.0f s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
    if (!pass && !allowed.count(c.id)) ++unexpected;
    if (c.id == 10) {
      const Outcome info = saturation_in_region();
      std::printf("criterion 10 info  saturation inside the closed-form region %s: %s\n", info.pass ? "holds" : "fails",
                  info.detail.c_str());
    }
  }
  return unexpected == 0 ? 0 : 1;
}
