#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scv/scv.hpp"

namespace scv {

struct VirtualTerm {
  std::array<PauliString, 4> paulis;  // (P_i, P_j, P_k, P_l)
  double alpha = 0.0;
  /// Exact numerator over VirtualDecomposition::denominator when that is nonzero.
  std::int64_t numerator = 0;
};

struct VirtualDecomposition {
  int n = 0;
  std::vector<VirtualTerm> terms;
  double gamma = 0.0;
  /// Common denominator of exact coefficients; 0 when coefficients are floating point.
  std::int64_t denominator = 0;
};

struct RatioEstimate {
  std::uint64_t seed = 0;
  std::size_t shots = 0;
  double a = 0.0;
  double b = 0.0;
  double ratio = 0.0;
  double variance_a = 0.0;
  double variance_b = 0.0;
  std::vector<std::pair<double, double>> records;  // (a_s, b_s)

  std::string to_json() const;
};

struct ExactExpectation {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

/// Thrown when the ratio estimator's denominator vanishes.
struct degenerate_denominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Matrix virtual_term_apply(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho);
/// Single-ancilla circuit: the X-quadrature block sum, optionally with a mid-circuit ancilla depolarizing layer.
Matrix virtual_term_circuit(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho, double p_idle = 0.0);

VirtualDecomposition decompose_supermap(const SymmetricOperator& sym);
VirtualDecomposition pauli_commutant_decomposition(const GeneratingSet& gens);
/// sum alpha * Theta^vir applied to `rho`.
Matrix virtual_apply(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho);

ExactExpectation exact_expectation(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho,
                                   const Matrix& obs);
RatioEstimate estimate_expectation(const VirtualDecomposition& decomp, const KrausChannel& channel, const Matrix& rho,
                                   const Matrix& obs, std::size_t shots, std::uint64_t seed);

double ancilla_depolarizing_scaling(const VirtualTerm& t, const KrausChannel& channel, const Matrix& rho, double p_idle);

struct IdleDistances {
  double raw = 0.0;
  double scv = 0.0;
  double vscv = 0.0;
};
/// Single-qubit idling over L steps; `boundary_noise` acts on the system right before and after the gadget.
IdleDistances mitigate_idling(const KrausChannel& noise_per_step, int L, const KrausChannel& boundary_noise,
                              const Matrix& rho);
IdleDistances mitigate_idling(const KrausChannel& noise_per_step, int L, const KrausChannel& boundary_noise);

struct SharedAncillaReport {
  bool proportional = false;   // output ∝ rho1 ⊗ rho2
  bool product_noise = false;  // joint noise factorizes into two single-system channels
  bool ok() const { return proportional && product_noise; }
};
bool shared_ancilla_check(const KrausChannel& noise1, const KrausChannel& noise2);
SharedAncillaReport shared_ancilla_check_joint(const KrausChannel& joint_noise, std::uint64_t seed = 11);

struct SelectCounts {
  int n = 0;
  long long depth = 0;
  int ancillas = 0;
  double total_error = 0.0;
};
SelectCounts select_model(int M, double p_err, bool vscv_enabled);
double select_error_model(int M, double p_err, bool vscv_enabled);

}  // namespace scv
