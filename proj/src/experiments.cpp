#include "scv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace scv {

namespace {

constexpr double kSectorTol = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& key, const std::string& raw) {
  // Accepts plain numbers and the forms pi, <a>pi, <a>*pi, optionally divided by a number.
  std::string s = trim(raw);
  double denom = 1.0;
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const std::string d = trim(s.substr(slash + 1));
      denom = std::stod(d, &used);
      if (used != d.size()) throw std::invalid_argument("trailing");
      s = trim(s.substr(0, slash));
    }
    double num = 0.0;
    const auto pi = s.find("pi");
    if (pi != std::string::npos) {
      if (pi + 2 != s.size()) throw std::invalid_argument("trailing");
      std::string coeff = trim(s.substr(0, pi));
      if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
      double c = 1.0;
      if (!coeff.empty()) {
        std::size_t used = 0;
        c = std::stod(coeff, &used);
        if (used != coeff.size()) throw std::invalid_argument("trailing");
      }
      num = c * std::numbers::pi;
    } else {
      std::size_t used = 0;
      num = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
    }
    if (denom == 0.0) throw std::invalid_argument("zero");
    return num / denom;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "' has malformed number '" + raw + "'");
  }
}

int parse_int(const std::string& key, const std::string& raw) {
  const double v = parse_number(key, raw);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw config_error("config: key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw config_error("config: key '" + key + "' must be a boolean");
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

/// Deterministic parallel map: results are stored by index regardless of scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F fn) {
  std::vector<T> out(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Matrix pure(const Vector& v) { return projector(v); }

Matrix evolve(const Matrix& u, const Matrix& rho) { return u * rho * u.adjoint(); }

GadgetNoiseConfig gadget_config(const ExperimentConfig& cfg, double p) {
  GadgetNoiseConfig g;
  g.gadget_error_rate = cfg.noiseless_gadget ? 0.0 : p / cfg.gadget_ratio;
  g.ancilla_idle_rate = cfg.ancilla_idle ? p : 0.0;
  g.flags_enabled = cfg.flags;
  return g;
}

std::array<double, 4> depolarizing_law(double p) { return {1.0 - p, p / 3.0, p / 3.0, p / 3.0}; }

bool wants(const ExperimentConfig& cfg, const std::string& mode) {
  return std::find(cfg.modes.begin(), cfg.modes.end(), mode) != cfg.modes.end();
}

double normalized_distance(const Matrix& unnormalized, const Matrix& ideal, double& probability) {
  probability = unnormalized.trace().real();
  if (probability <= 0.0) throw invariant_violation("post-selection probability is zero");
  return trace_distance(unnormalized / probability, ideal);
}

/// One unitary step of a layered circuit together with the Pauli gadget that protects it.
struct Layer {
  Matrix u;
  GeneratingSet gens;
};

struct LayeredModel {
  int n = 0;
  std::vector<Layer> period;  // repeated `repeats` times
  int repeats = 0;
  Matrix input;
  GeneratingSet whole_gens;
  std::optional<SymmetricOperator> sv_symmetry;
};

/// Metrics at one p_err point for raw, SV, SCV on the whole circuit and SCV on every layer.
std::vector<SweepRow> run_layered_point(const LayeredModel& model, const ExperimentConfig& cfg, double p) {
  std::vector<SweepRow> rows;
  const int n = model.n;
  Matrix ideal = model.input;
  for (int r = 0; r < model.repeats; ++r)
    for (const auto& l : model.period) ideal = evolve(l.u, ideal);

  auto noisy_circuit = [&](Matrix& x) {
    for (int r = 0; r < model.repeats; ++r)
      for (const auto& l : model.period) {
        x = evolve(l.u, x);
        apply_local_depolarizing(x, n, p);
      }
  };
  const GadgetNoiseConfig gcfg = gadget_config(cfg, p);

  Matrix raw = model.input;
  noisy_circuit(raw);
  if (wants(cfg, "raw")) rows.push_back({p, "raw", "trace_distance", trace_distance(raw, ideal)});
  if (wants(cfg, "SV")) {
    const SvResult sv = symmetry_verification(*model.sv_symmetry, raw, ideal);
    rows.push_back({p, "SV", "trace_distance", trace_distance(sv.state, ideal)});
    rows.push_back({p, "SV", "overhead", 1.0 / sv.probability});
  }
  if (wants(cfg, "SCV_whole")) {
    GadgetRun run = run_gadget(model.whole_gens, model.input, noisy_circuit, gcfg, true);
    double prob = 0.0;
    const double d = normalized_distance(run.state.block(run.accept, run.accept), ideal, prob);
    rows.push_back({p, "SCV_whole", "trace_distance", d});
    rows.push_back({p, "SCV_whole", "overhead", 1.0 / prob});
  }
  if (wants(cfg, "SCV_layerwise")) {
    std::vector<std::unique_ptr<PauliFrameGadget>> fast;
    if (!cfg.flags)
      for (const auto& l : model.period)
        fast.push_back(std::make_unique<PauliFrameGadget>(l.gens, l.u, depolarizing_law(p), gcfg));
    Matrix x = model.input;
    double overhead = 1.0;
    for (int r = 0; r < model.repeats; ++r) {
      for (std::size_t k = 0; k < model.period.size(); ++k) {
        Matrix out;
        if (!cfg.flags) {
          out = fast[k]->apply(x);
        } else {
          const Layer& l = model.period[k];
          auto layer = [&](Matrix& b) {
            b = evolve(l.u, b);
            apply_local_depolarizing(b, n, p);
          };
          GadgetRun run = run_gadget(l.gens, x, layer, gcfg, true);
          out = run.state.block(run.accept, run.accept);
        }
        const double prob = out.trace().real();
        if (prob <= 0.0) throw invariant_violation("layer-wise post-selection probability is zero");
        overhead /= prob;
        x = out / prob;
      }
    }
    rows.push_back({p, "SCV_layerwise", "trace_distance", trace_distance(x, ideal)});
    rows.push_back({p, "SCV_layerwise", "overhead", overhead});
  }
  return rows;
}

SweepResult sweep_points(const std::string& experiment, const std::string& sweep_var, const ExperimentConfig& cfg,
                         const std::vector<double>& grid,
                         const std::function<std::vector<SweepRow>(double)>& point) {
  SweepResult res;
  res.experiment = experiment;
  res.sweep_var = sweep_var;
  res.metadata = cfg.echo();
  auto results = parallel_map<std::vector<SweepRow>>(grid.size(), [&](std::size_t i) { return point(grid[i]); });
  for (const auto& rs : results)
    for (const auto& r : rs) res.rows.push_back(r);
  return res;
}

Vector alternating_state(int n) {
  std::uint64_t idx = 0;
  for (int q = 1; q < n; q += 2) idx |= std::uint64_t{1} << (n - 1 - q);
  return basis_state(n, idx);
}

Vector plus_state(int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  return Vector::Constant(d, cplx(1.0 / std::sqrt(static_cast<double>(d))));
}

PauliString uniform(int n, char c) {
  return PauliString::from_string(std::string(static_cast<std::size_t>(n), c));
}

std::vector<double> require_grid(const std::vector<double>& g, const char* key) {
  if (g.empty()) throw config_error(std::string("config: '") + key + "' must list at least one value");
  return g;
}

}  // namespace

SvResult symmetry_verification(const SymmetricOperator& sym, const Matrix& state, const Matrix& reference) {
  const auto& ps = sym.projectors();
  if (state.rows() != ps.front().rows() || reference.rows() != state.rows())
    throw dimension_error("symmetry_verification: dimension mismatch");
  const double ref_tr = reference.trace().real();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double w = (ps[i] * reference).trace().real() / ref_tr;
    if (w < 1.0 - kSectorTol) continue;
    Matrix kept = ps[i] * state * ps[i];
    const double prob = kept.trace().real();
    if (prob <= 1e-15) throw invariant_violation("symmetry_verification: zero-probability sector");
    return {kept / prob, prob, i};
  }
  throw config_error("symmetry_verification: the reference state is not inside a single symmetry sector");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto numbers = [&] {
      std::vector<double> v;
      for (const auto& s : split_list(value)) v.push_back(parse_number(key, s));
      return v;
    };
    auto ints = [&] {
      std::vector<int> v;
      for (const auto& s : split_list(value)) v.push_back(parse_int(key, s));
      return v;
    };
    if (key == "experiment") c.experiment = value;
    else if (key == "n") c.n = parse_int(key, value);
    else if (key == "theta") c.theta = parse_number(key, value);
    else if (key == "layers") c.layers = parse_int(key, value);
    else if (key == "p_err") c.p_err = numbers();
    else if (key == "theta_grid") c.theta_grid = numbers();
    else if (key == "l_grid") c.l_grid = ints();
    else if (key == "m_grid") c.m_grid = ints();
    else if (key == "gadget_ratio") c.gadget_ratio = parse_number(key, value);
    else if (key == "modes") c.modes = split_list(value);
    else if (key == "flags") c.flags = parse_bool(key, value);
    else if (key == "ancilla_idle") c.ancilla_idle = parse_bool(key, value);
    else if (key == "noiseless_gadget") c.noiseless_gadget = parse_bool(key, value);
    else if (key == "boundary") {
      if (value != "open" && value != "periodic") throw config_error("config: boundary must be open or periodic");
      c.open_boundary = value == "open";
    } else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "hamiltonian") c.hamiltonian = value;
    else if (key == "code") c.code = value;
    else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  ExperimentConfig c = parse(ss.str());
  const std::filesystem::path ham(c.hamiltonian);
  if (!c.hamiltonian.empty() && ham.is_relative() && !std::filesystem::exists(ham))
    c.hamiltonian = (std::filesystem::path(path).parent_path() / ham).string();
  return c;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> experiments{"heisenberg", "floquet", "u1", "idle", "select", "code"};
  if (std::find(experiments.begin(), experiments.end(), experiment) == experiments.end())
    throw config_error("config: unknown experiment '" + experiment + "'");
  if (layers < 1) throw config_error("config: layers must be at least 1");
  if (n < 1 || n > kMaxQubits) throw config_error("config: n outside [1, " + std::to_string(kMaxQubits) + "]");
  for (double p : p_err)
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("config: p_err values must lie in [0, 1]");
  if (!(gadget_ratio > 0.0)) throw config_error("config: gadget_ratio must be positive");
  for (int l : l_grid)
    if (l < 0) throw config_error("config: l_grid values must be nonnegative");
  for (int m : m_grid)
    if (m < 2) throw config_error("config: m_grid values must be at least 2");
  static const std::vector<std::string> known{"raw",          "SV",           "SCV_whole",   "SCV_layerwise", "VSCV",
                                              "SCV",          "SCV_parity",   "SCV_U1",      "SCV_U1_noisy",  "detect",
                                              "correct"};
  for (const auto& m : modes)
    if (std::find(known.begin(), known.end(), m) == known.end()) throw config_error("config: unknown mode '" + m + "'");
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  auto join = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(static_cast<double>(v[i]));
    return s;
  };
  std::string ms;
  for (std::size_t i = 0; i < modes.size(); ++i) ms += (i ? "," : "") + modes[i];
  return {{"experiment", experiment},
          {"n", std::to_string(n)},
          {"theta", fmt(theta)},
          {"layers", std::to_string(layers)},
          {"p_err", join(p_err)},
          {"theta_grid", join(theta_grid)},
          {"l_grid", join(l_grid)},
          {"m_grid", join(m_grid)},
          {"gadget_ratio", fmt(gadget_ratio)},
          {"modes", ms},
          {"flags", flags ? "true" : "false"},
          {"ancilla_idle", ancilla_idle ? "true" : "false"},
          {"noiseless_gadget", noiseless_gadget ? "true" : "false"},
          {"boundary", open_boundary ? "open" : "periodic"},
          {"seed", std::to_string(seed)},
          {"hamiltonian", hamiltonian},
          {"code", code}};
}

SweepResult run_heisenberg(const ExperimentConfig& cfg) {
  if (cfg.n % 2) throw config_error("heisenberg: n must be even for the |01...> input");
  const HamiltonianSpec h = build_heisenberg(cfg.n, cfg.open_boundary);
  LayeredModel model;
  model.n = cfg.n;
  const GeneratingSet gens = commutant(h.term_set());
  model.period.push_back({expi_hermitian(h.matrix(), cfg.theta / cfg.layers), gens});
  model.repeats = cfg.layers;
  model.input = pure(alternating_state(cfg.n));
  model.whole_gens = gens;
  model.sv_symmetry = pauli_symmetry(uniform(cfg.n, 'Z'));
  return sweep_points("heisenberg", "p_err", cfg, require_grid(cfg.p_err, "p_err"),
                      [&](double p) { return run_layered_point(model, cfg, p); });
}

SweepResult run_floquet(const ExperimentConfig& cfg) {
  const FloquetModel f = build_floquet(cfg.n, cfg.open_boundary);
  LayeredModel model;
  model.n = cfg.n;
  model.period.push_back({expi_hermitian(f.hz.matrix(), cfg.theta), commutant(f.hz.term_set())});
  model.period.push_back({expi_hermitian(f.hx.matrix(), cfg.theta), commutant(f.hx.term_set())});
  model.repeats = cfg.layers;
  model.input = pure(plus_state(cfg.n));
  PauliSet all = f.hx.term_set();
  for (const auto& p : f.hz.term_set()) all.insert(p);
  model.whole_gens = commutant(all);
  model.sv_symmetry = pauli_symmetry(uniform(cfg.n, 'X'));
  return sweep_points("floquet", "p_err", cfg, require_grid(cfg.p_err, "p_err"),
                      [&](double p) { return run_layered_point(model, cfg, p); });
}

SweepResult run_u1(const ExperimentConfig& cfg) {
  if (cfg.hamiltonian.empty()) throw config_error("u1: 'hamiltonian' file is required");
  if (cfg.p_err.size() != 1) throw config_error("u1: 'p_err' must hold exactly one value");
  const HamiltonianSpec h = load_hamiltonian(cfg.hamiltonian);
  const int n = h.n;
  const double p = cfg.p_err.front();
  const Matrix hm = h.matrix();
  Rng rng(cfg.seed);
  const Matrix input = pure(haar_state(n, rng));
  const GeneratingSet parity(n, {uniform(n, 'Z')});
  const SymmetricOperator number = particle_number_symmetry(n);
  if (!check_symmetric(expi_hermitian(hm, 1.0), number, 1e-8))
    throw config_error("u1: the Hamiltonian does not conserve particle number");

  return sweep_points("u1", "theta", cfg, require_grid(cfg.theta_grid, "theta_grid"), [&](double theta) {
    std::vector<SweepRow> rows;
    const double q = n * theta * p;
    if (!(q >= 0.0 && q <= 1.0)) throw config_error("u1: global depolarizing rate n*theta*p_err outside [0, 1]");
    const Matrix u = expi_hermitian(hm, theta);
    const Matrix ideal = evolve(u, input);
    auto channel = [&](Matrix& x) {
      x = evolve(u, x);
      apply_global_depolarizing(x, q);
    };
    auto gadget = [&](const GadgetSpec& spec, double rate, const std::string& mode) {
      GadgetNoiseConfig g;
      g.gadget_error_rate = rate;
      g.ancilla_idle_rate = cfg.ancilla_idle ? p : 0.0;
      g.flags_enabled = cfg.flags && std::holds_alternative<GeneratingSet>(spec);
      GadgetRun run = run_gadget(spec, input, channel, g, true);
      double prob = 0.0;
      const double d = normalized_distance(run.state.block(run.accept, run.accept), ideal, prob);
      rows.push_back({theta, mode, "trace_distance", d});
      rows.push_back({theta, mode, "overhead", 1.0 / prob});
    };
    if (wants(cfg, "raw")) {
      Matrix raw = input;
      channel(raw);
      rows.push_back({theta, "raw", "trace_distance", trace_distance(raw, ideal)});
    }
    const double clifford_rate = cfg.noiseless_gadget ? 0.0 : p / cfg.gadget_ratio;
    if (wants(cfg, "SCV_parity")) gadget(parity, clifford_rate, "SCV_parity");
    if (wants(cfg, "SCV_U1")) gadget(number, 0.0, "SCV_U1");
    if (wants(cfg, "SCV_U1_noisy")) gadget(number, cfg.noiseless_gadget ? 0.0 : p, "SCV_U1_noisy");
    return rows;
  });
}

SweepResult run_idle(const ExperimentConfig& cfg) {
  const double p = cfg.p_err.empty() ? 1e-7 : cfg.p_err.front();
  const KrausChannel step = single_qubit_depolarizing(p);
  if (cfg.l_grid.empty()) throw config_error("idle: 'l_grid' must list at least one value");
  std::vector<double> grid(cfg.l_grid.begin(), cfg.l_grid.end());
  return sweep_points("idle", "L", cfg, grid, [&](double l) {
    const IdleDistances d = mitigate_idling(step, static_cast<int>(l), step);
    return std::vector<SweepRow>{{l, "raw", "trace_distance", d.raw},
                                 {l, "SCV", "trace_distance", d.scv},
                                 {l, "VSCV", "trace_distance", d.vscv}};
  });
}

SweepResult run_select(const ExperimentConfig& cfg) {
  const double p = cfg.p_err.empty() ? 1e-7 : cfg.p_err.front();
  if (cfg.m_grid.empty()) throw config_error("select: 'm_grid' must list at least one value");
  std::vector<double> grid(cfg.m_grid.begin(), cfg.m_grid.end());
  return sweep_points("select", "M", cfg, grid, [&](double mm) {
    const int m = static_cast<int>(mm);
    const SelectCounts raw = select_model(m, p, false), vs = select_model(m, p, true);
    return std::vector<SweepRow>{{mm, "raw", "n", static_cast<double>(raw.n)},
                                 {mm, "raw", "total_error", raw.total_error},
                                 {mm, "VSCV", "total_error", vs.total_error}};
  });
}

SweepResult run_code_hamiltonian(const ExperimentConfig& cfg) {
  const HamiltonianSpec h = build_code_hamiltonian(cfg.code);
  const int n = h.n;
  const GeneratingSet gens = commutant(h.term_set());
  const Matrix u = expi_hermitian(h.matrix(), cfg.theta / cfg.layers);
  Rng rng(cfg.seed);
  const Matrix input = pure(haar_state(n, rng));

  // Feedback learned from the weight-one part of the layer noise; it is independent of p_err.
  std::optional<FeedbackPolicy> policy;
  if (wants(cfg, "correct")) {
    std::vector<Matrix> ks{u};
    for (int q = 0; q < n; ++q)
      for (char c : {'X', 'Y', 'Z'}) ks.push_back(PauliString::single(n, q, c).to_matrix() * u);
    const double s = 1.0 / std::sqrt(static_cast<double>(ks.size()));
    for (auto& k : ks) k *= s;
    policy = find_feedback(gens, KrausChannel(n, n, ks), u);
    if (!policy) throw invariant_violation("code: no Pauli feedback corrects weight-one errors");
  }

  return sweep_points("code", "p_err", cfg, require_grid(cfg.p_err, "p_err"), [&](double p) {
    std::vector<SweepRow> rows;
    Matrix ideal = input;
    for (int l = 0; l < cfg.layers; ++l) ideal = evolve(u, ideal);
    if (wants(cfg, "raw")) {
      Matrix x = input;
      for (int l = 0; l < cfg.layers; ++l) {
        x = evolve(u, x);
        apply_local_depolarizing(x, n, p);
      }
      rows.push_back({p, "raw", "trace_distance", trace_distance(x, ideal)});
    }
    GadgetNoiseConfig g = gadget_config(cfg, p);
    g.flags_enabled = false;
    const PauliFrameGadget gadget(gens, u, depolarizing_law(p), g);
    if (wants(cfg, "detect")) {
      Matrix x = input;
      double overhead = 1.0;
      for (int l = 0; l < cfg.layers; ++l) {
        Matrix out = gadget.apply(x);
        const double prob = out.trace().real();
        if (prob <= 0.0) throw invariant_violation("code: detection probability is zero");
        overhead /= prob;
        x = out / prob;
      }
      rows.push_back({p, "detect", "trace_distance", trace_distance(x, ideal)});
      rows.push_back({p, "detect", "overhead", overhead});
    }
    if (wants(cfg, "correct")) {
      Matrix x = input;
      for (int l = 0; l < cfg.layers; ++l) x = gadget.apply_corrected(x, *policy);
      const double tr = x.trace().real();
      if (std::abs(tr - 1.0) > 1e-9) throw invariant_violation("code: corrected layers are not trace preserving");
      rows.push_back({p, "correct", "trace_distance", trace_distance(x, ideal)});
      rows.push_back({p, "correct", "overhead", 1.0});
    }
    return rows;
  });
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment == "heisenberg") return run_heisenberg(cfg);
  if (cfg.experiment == "floquet") return run_floquet(cfg);
  if (cfg.experiment == "u1") return run_u1(cfg);
  if (cfg.experiment == "idle") return run_idle(cfg);
  if (cfg.experiment == "select") return run_select(cfg);
  return run_code_hamiltonian(cfg);
}

double layerwise_detect_overhead(int n, int layers, double p, std::uint64_t seed) {
  if (n < 2 || n % 2) throw std::invalid_argument("layerwise_detect_overhead: n must be even and at least 2");
  const HamiltonianSpec h = build_heisenberg(n, true);
  const GeneratingSet gens = commutant(h.term_set());
  const Matrix u = expi_hermitian(h.matrix(), 2.0 * std::numbers::pi / layers);
  const PauliString flip = PauliString::single(n, 0, 'X');
  Rng rng(seed);
  Matrix x = pure(haar_state(n, rng));
  double overhead = 1.0;
  for (int l = 0; l < layers; ++l) {
    auto layer = [&](Matrix& b) { b = (1.0 - p) * evolve(u, b) + p * conjugate(flip, evolve(u, b)); };
    GadgetRun run = run_gadget(gens, x, layer, GadgetNoiseConfig{}, true);
    const Matrix out = run.state.block(run.accept, run.accept);
    const double prob = out.trace().real();
    overhead /= prob;
    x = out / prob;
  }
  return overhead;
}

}  // namespace scv
