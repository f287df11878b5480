#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scv/linalg.hpp"

namespace scv {

/// Hermitian PSD operator with trace in (0, 1].
class DensityOperator {
 public:
  DensityOperator() = default;
  /// Validates Hermiticity, positivity and trace within `tol`.
  explicit DensityOperator(Matrix m, double tol = 1e-10);
  static DensityOperator pure(const Vector& v) { return DensityOperator(projector(v)); }

  int n() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  /// Copy rescaled to unit trace.
  DensityOperator normalized() const;

 private:
  int n_ = 0;
  Matrix m_;
};

class KrausChannel {
 public:
  KrausChannel() = default;
  KrausChannel(int n_in, int n_out, std::vector<Matrix> kraus);

  static KrausChannel identity(int n);
  static KrausChannel unitary(const Matrix& u);
  /// Zero map (no Kraus operators).
  static KrausChannel zero(int n_in, int n_out) { return KrausChannel(n_in, n_out, {}); }

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const std::vector<Matrix>& kraus_ops() const { return kraus_; }

  /// sum K^dagger K.
  Matrix effect() const;
  bool is_trace_preserving(double tol = 1e-10) const;
  bool is_trace_non_increasing(double tol = 1e-10) const;

  /// sum K a K^dagger for an arbitrary (not necessarily Hermitian) operator.
  Matrix apply(const Matrix& a) const;
  /// Channel with every Kraus operator multiplied by `s` (action scaled by |s|^2).
  KrausChannel scaled(double factor) const;

 private:
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<Matrix> kraus_;
};

/// Sub-normalized map produced by post-selection.
class TraceNonIncreasingMap {
 public:
  TraceNonIncreasingMap() = default;
  explicit TraceNonIncreasingMap(KrausChannel inner);

  const KrausChannel& inner() const { return inner_; }
  double success_probability(const Matrix& rho) const { return inner_.apply(rho).trace().real(); }

 private:
  KrausChannel inner_;
};

struct NoiseModel {
  enum class Kind { pauli, local_depolarizing, global_depolarizing };
  Kind kind = Kind::pauli;
  /// For the pauli kind: probabilities p_i of Paulis P_i. Missing mass goes to the identity.
  std::vector<std::pair<double, PauliString>> paulis;
  /// Per-qubit (local) or total (global) depolarizing rate.
  double p_err = 0.0;

  static NoiseModel pauli_noise(std::vector<std::pair<double, PauliString>> terms);
  static NoiseModel local_depolarizing(double p);
  static NoiseModel global_depolarizing(double q);
};

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho);

/// a after b.
KrausChannel compose(const KrausChannel& a, const KrausChannel& b);
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);
/// Sum of two maps with equal dimensions (Kraus lists concatenated).
KrausChannel add(const KrausChannel& a, const KrausChannel& b);

/// Unnormalized Choi matrix sum_ij |i><j| ⊗ E(|i><j|), trace 2^n_in for channels.
Matrix choi(const KrausChannel& channel);
/// Choi state (trace one for trace-preserving channels).
Matrix choi_state(const KrausChannel& channel);
/// Frobenius distance between Choi states.
double choi_distance(const KrausChannel& a, const KrausChannel& b);

std::optional<double> proportionality(const KrausChannel& a, const KrausChannel& b, double tol = 1e-9);

double trace_distance(const Matrix& rho, const Matrix& sigma);
/// Squared Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Matrix& rho, const Matrix& sigma, double psd_tol = 1e-8);

/// Heuristic min over pure inputs on system ⊗ reference of the output fidelity.
double worst_case_fidelity(const KrausChannel& a, const KrausChannel& b, int restarts = 8,
                           double tol = 1e-12, std::uint64_t seed = 7);

KrausChannel build_noise(const NoiseModel& model, int n);
KrausChannel single_qubit_depolarizing(double p);

/// In-place fast channel actions on arbitrary operators of n qubits.
void apply_depolarizing_qubit(Matrix& a, int n, int qubit, double p);
void apply_local_depolarizing(Matrix& a, int n, double p);
/// a -> w_I a + w_X XaX + w_Y YaY + w_Z ZaZ on one qubit; weights may be negative.
void apply_pauli_qubit(Matrix& a, int n, int qubit, const std::array<double, 4>& w);
void apply_global_depolarizing(Matrix& a, double q);
void apply_pauli_channel(Matrix& a, const std::vector<std::pair<double, PauliString>>& terms);

/// Kraus pruning threshold on Frobenius norm.
inline constexpr double kKrausPrune = 1e-12;

}  // namespace scv
