#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "scv/register_sim.hpp"
#include "scv/symmetry.hpp"

namespace scv {

struct DetectionResult {
  TraceNonIncreasingMap purified;
  double success_probability_of(const Matrix& rho) const { return purified.success_probability(rho); }
};

struct GadgetNoiseConfig {
  /// Local depolarizing rate on all system and ancilla qubits right after U_E and right before U_D.
  double gadget_error_rate = 0.0;
  /// Depolarizing rate on every ancilla (and flag) once per channel invocation.
  double ancilla_idle_rate = 0.0;
  bool flags_enabled = false;

  void validate() const;
};

/// Outcome (syndrome) -> Pauli correction.
struct FeedbackPolicy {
  int n = 0;
  std::map<std::uint64_t, PauliString> corrections;

  static FeedbackPolicy trivial(int n, std::uint64_t outcomes);
  const PauliString& at(std::uint64_t outcome) const;
};

/// Either a general symmetric operator or Pauli generators of a commutant.
using GadgetSpec = std::variant<SymmetricOperator, GeneratingSet>;

int gadget_qubits(const GadgetSpec& spec);
int gadget_n(const GadgetSpec& spec);
std::uint64_t gadget_outcomes(const GadgetSpec& spec);

/// Channel-to-channel transformer acting on Kraus data.
class Supermap {
 public:
  using Fn = std::function<KrausChannel(const KrausChannel&)>;
  Supermap(int n, Fn f) : n_(n), f_(std::move(f)) {}
  static Supermap identity(int n);

  int n() const { return n_; }
  KrausChannel operator()(const KrausChannel& e) const;

 private:
  int n_;
  Fn f_;
};

Supermap detection_supermap(const SymmetricOperator& sym);
/// Single-Pauli gadget K -> (K + QKQ)/2.
Supermap detection_supermap(const PauliString& q);
Supermap concatenate(const Supermap& outer, const Supermap& inner);

DetectionResult scv_detect(const SymmetricOperator& sym, const KrausChannel& noisy);
DetectionResult scv_detect_pauli(const GeneratingSet& gens, const KrausChannel& noisy);
DetectionResult scv_detect_circuit(const GadgetSpec& spec, const KrausChannel& noisy, const GadgetNoiseConfig& cfg);

/// Kraus operators of the branch with the given outcome, before feedback.
std::vector<Matrix> branch_kraus(const GadgetSpec& spec, const Matrix& k, std::uint64_t outcome);

KrausChannel scv_correct(const GadgetSpec& spec, const KrausChannel& noisy, const FeedbackPolicy& policy);
/// Searches Pauli feedback per outcome so the corrected channel equals `ideal` (a unitary channel).
std::optional<FeedbackPolicy> find_feedback(const GadgetSpec& spec, const KrausChannel& noisy, const Matrix& ideal);

bool theorem1_condition(const KrausChannel& noise, const SymmetricOperator& sym, double tol = 1e-9);
bool theorem3prime_condition(const KrausChannel& noise, const SymmetricOperator& sym, double tol = 1e-9);
bool detectable(const PauliString& p, const GeneratingSet& gens);
/// Phaseless {P_i P_j} \ {I} over the noise Paulis (identity included as P_0).
PauliSet correction_products(const PauliSet& noise_paulis);
bool correctable_set(const PauliSet& noise_paulis, const PauliSet& q_u);

/// Joint system ⊗ register operator right before measurement for input operator `x`.
/// `channel` acts on system blocks; used by experiments for layered circuits.
struct GadgetRun {
  RegisterState state;
  /// Register index of the accepted outcome (0^m with flags 0).
  Eigen::Index accept = 0;
};
GadgetRun run_gadget(const GadgetSpec& spec, const Matrix& x, const std::function<void(Matrix&)>& channel,
                     const GadgetNoiseConfig& cfg, bool hermitian);

/**
 * @brief Pauli-gadget detection of one layer L(x) = N_after(U x U^dagger) evaluated in the Pauli frame.
 *
 * U must commute with every generator and N_after is a product of identical single-qubit Pauli channels.
 * Gadget and ancilla-idle noise follow GadgetNoiseConfig exactly as in run_gadget. Faults are tracked as
 * syndrome flips and frame Paulis, so no ancilla blocks are stored. Flags are not supported.
 */
class PauliFrameGadget {
 public:
  PauliFrameGadget(const GeneratingSet& gens, const Matrix& u, const std::array<double, 4>& layer_noise,
                   const GadgetNoiseConfig& cfg);

  /// Unnormalized accepted output; its trace is the acceptance probability.
  Matrix apply(const Matrix& rho) const;
  /// Unnormalized output of the branch with syndrome `outcome`.
  Matrix apply_branch(const Matrix& rho, std::uint64_t outcome) const;
  /// sum over outcomes of C_s (branch s) C_s with C_s = policy.at(s).
  Matrix apply_corrected(const Matrix& rho, const FeedbackPolicy& policy) const;

 private:
  int n_;
  Matrix u_;
  std::vector<PauliString> frame_;               // Q^w for every w
  std::vector<PauliString> characters_;          // Q^b for every b (signs of the noise)
  std::vector<std::vector<double>> weight_;      // weight_[b][w]
  std::array<double, 4> before_{}, after_{};

  /// Term of the character sum for index b, before the syndrome sign.
  Matrix character_term(const Matrix& rho, std::size_t b) const;
};

/// Reconstructs a Kraus channel from a linear map on n-qubit operators via its Choi matrix.
KrausChannel channel_from_map(int n, const std::function<Matrix(const Matrix&)>& f);

}  // namespace scv
