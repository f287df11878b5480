#pragma once

#include <array>
#include <string>
#include <vector>

#include "scv/scv.hpp"

namespace scv {

/// rho(theta, p) = (I + (1-2p)(cos(theta) X + sin(theta) Y)) / 2.
struct SingleQubitXYState {
  double theta = 0.0;
  double p = 0.0;

  double x() const;
  double y() const;
  /// Throws std::domain_error outside theta in [0, pi/4], p in [0, 1].
  void validate() const;
};

struct RobustnessResult {
  double value = 0.0;
  /// Piecewise branch that fired ("stabilizer", "edge", "cap") or "bruteforce".
  std::string branch;
  /// Mixture weights over the stabilizer states +X, -X, +Y, -Y, +Z, -Z (brute-force path only).
  std::array<double, 6> witness{};
};

struct BoundReport {
  double theta = 0.0, p0 = 0.0, px = 0.0, py = 0.0, pz = 0.0;
  double robustness_bound = 0.0;
  double weight_bound = 0.0;
  double achieved_fidelity = 0.0;
  bool saturated = false;
  /// Choi distance between the purified channel and (1-py-pz) I + (py+pz) Z.Z (saturation_check only).
  double residual_distance = 0.0;

  std::string to_json() const;
};

RobustnessResult robustness_closed(const SingleQubitXYState& s);
/// max{(2-sqrt2)(1 + |1-2p| cos(theta - pi/4)), 1}.
double robustness_main_text(const SingleQubitXYState& s);
RobustnessResult weight_closed(const SingleQubitXYState& s);

/// Minimal lambda >= 1 with lambda*sigma - rho PSD over the single-qubit stabilizer octahedron.
RobustnessResult robustness_bruteforce(const SingleQubitXYState& s, double tol = 1e-12);
RobustnessResult robustness_bruteforce_bloch(const std::array<double, 3>& r, double tol = 1e-12);
/// Maximal lambda <= 1 with rho - lambda*sigma PSD over the single-qubit stabilizer octahedron.
RobustnessResult weight_bruteforce(const SingleQubitXYState& s, double tol = 1e-12);
RobustnessResult weight_bruteforce_bloch(const std::array<double, 3>& r, double tol = 1e-12);

double channel_robustness(double theta, double p0, double px, double py, double pz);
double channel_weight(double theta, double p0, double px, double py, double pz);

/// Rz(theta) = exp(-i theta Z / 2) followed by the Pauli channel (p0, px, py, pz).
KrausChannel noisy_rz(double theta, double p0, double px, double py, double pz);

/// Robustness and weight bounds plus the fidelity reached by the Z-commutant corrector with X feedback.
BoundReport fidelity_bounds(double theta, double p0, double px, double py, double pz);
BoundReport saturation_check(double theta, double p0, double px, double py, double pz);

bool theorem3_condition(const PauliSet& noise_paulis, const PauliSet& h_terms);
bool theorem4_condition(const PauliSet& noise_paulis, const PauliSet& h_terms);

struct CovariantReport {
  bool possible = false;
  /// Terms of Q'_H outside P^cor, each of which can be kept while correcting.
  std::vector<PauliString> preserved_terms;
};
CovariantReport covariant_condition(const PauliSet& h_prime_terms, const PauliSet& p_cor);

}  // namespace scv
