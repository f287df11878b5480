#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scv/vscv.hpp"

namespace scv {

/// Invalid configuration or input file; maps to CLI exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computed quantity broke an invariant; maps to CLI exit code 3.
struct invariant_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HamiltonianSpec {
  int n = 0;
  std::vector<std::pair<double, PauliString>> terms;

  Matrix matrix() const;
  /// Q'_H: the distinct Paulis with nonzero coefficient.
  PauliSet term_set() const;
};

HamiltonianSpec build_heisenberg(int n, bool open_boundary = true);
struct FloquetModel {
  HamiltonianSpec hx;
  HamiltonianSpec hz;
};
FloquetModel build_floquet(int n, bool open_boundary = true);
/// "5_1_3": H = -sum of the four cyclic XZZXI stabilizer generators.
HamiltonianSpec build_code_hamiltonian(const std::string& code_id);
/// Lines `<re> <im> <pauli>`; `#` starts a comment. Throws config_error with the line number.
HamiltonianSpec load_hamiltonian(const std::string& path);
HamiltonianSpec parse_hamiltonian(const std::string& text, const std::string& source = "<string>");

struct SvResult {
  Matrix state;
  double probability = 0.0;
  std::size_t sector = 0;
};
/// Post-selects `state` on the eigenspace of `sym` that contains `reference`.
SvResult symmetry_verification(const SymmetricOperator& sym, const Matrix& state, const Matrix& reference);

struct ExperimentConfig {
  std::string experiment;  // heisenberg | floquet | u1 | idle | select | code
  int n = 4;
  double theta = 0.0;
  int layers = 1;
  std::vector<double> p_err;
  std::vector<double> theta_grid;
  std::vector<int> l_grid;
  std::vector<int> m_grid;
  double gadget_ratio = 100.0;
  std::vector<std::string> modes;
  bool flags = false;
  bool ancilla_idle = false;
  bool noiseless_gadget = false;
  bool open_boundary = true;
  std::uint64_t seed = 1;
  std::string hamiltonian;
  std::string code = "5_1_3";

  /// Parses `key = value` lines; lists are comma-separated. Throws config_error.
  static ExperimentConfig parse(const std::string& text);
  /// A relative hamiltonian path that does not exist from the working directory is taken relative to the file.
  static ExperimentConfig load(const std::string& path);
  void validate() const;
  std::map<std::string, std::string> echo() const;
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string mode;
  std::string metric;
  double value = 0.0;
};

struct SweepResult {
  std::string experiment;
  std::string sweep_var;
  std::vector<SweepRow> rows;
  std::map<std::string, std::string> metadata;

  void add(double x, const std::string& mode, const std::string& metric, double value);
  /// Values of one (mode, metric) series in row order.
  std::vector<std::pair<double, double>> series(const std::string& mode, const std::string& metric) const;
  std::string to_csv() const;
  std::string to_json() const;
};

/// Slope of log(y) against log(x) by least squares.
double loglog_slope(const std::vector<std::pair<double, double>>& points);

SweepResult run_heisenberg(const ExperimentConfig& cfg);
SweepResult run_floquet(const ExperimentConfig& cfg);
SweepResult run_u1(const ExperimentConfig& cfg);
SweepResult run_idle(const ExperimentConfig& cfg);
SweepResult run_select(const ExperimentConfig& cfg);
SweepResult run_code_hamiltonian(const ExperimentConfig& cfg);
SweepResult run_experiment(const ExperimentConfig& cfg);

/// Detect-mode inverse acceptance over L layers whose only noise is a detectable error of rate p per layer.
double layerwise_detect_overhead(int n, int layers, double p, std::uint64_t seed);

int cli_main(int argc, char** argv);

}  // namespace scv
