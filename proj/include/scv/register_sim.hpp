#pragma once

#include <functional>
#include <vector>

#include "scv/channels.hpp"

namespace scv {

/**
 * @brief Joint system ⊗ ancilla operator stored as sum_ab X_ab ⊗ |a><b|.
 *
 * Ancilla qubit k is bit k of the register index a, so the register value is
 * sum_k a_k 2^k. Only ancilla operations ever mix blocks, which keeps the cost
 * of system operations at (#blocks) dense products of system size.
 */
class RegisterState {
 public:
  /// System operator `x` with all ancillas in |0>.
  RegisterState(const Matrix& x, int ancillas, bool hermitian);

  int n() const { return n_; }
  int ancillas() const { return m_; }
  Eigen::Index reg_dim() const { return Eigen::Index{1} << m_; }

  Matrix& block(Eigen::Index a, Eigen::Index b) { return blocks_[a * reg_dim() + b]; }
  const Matrix& block(Eigen::Index a, Eigen::Index b) const { return blocks_[a * reg_dim() + b]; }

  /// Applies a linear map to every system block.
  void map_system(const std::function<void(Matrix&)>& f);
  /// Block (a,b) <- L^{a_k} X_ab (R^dagger)^{b_k}, i.e. a controlled system unitary with ancilla k as control.
  void controlled(int k, const Matrix& v);
  void controlled(int k, const PauliString& p);

  void ancilla_gate(int k, const Eigen::Matrix2cd& g);
  void ancilla_unitary(const Matrix& w);
  void ancilla_diagonal(const std::vector<cplx>& phases);
  void ancilla_depolarizing(int k, double p);
  /// Arbitrary single-qubit Kraus channel on ancilla k.
  void ancilla_channel(int k, const std::vector<Eigen::Matrix2cd>& kraus);

  /// Sum of diagonal blocks (ancillas traced out).
  Matrix trace_ancillas() const;

 private:
  int n_;
  int m_;
  bool hermitian_;
  std::vector<Matrix> blocks_;
};

/// H on one qubit.
Eigen::Matrix2cd hadamard();
/// Inverse quantum Fourier transform on m qubits, register value sum_k a_k 2^k.
Matrix inverse_qft(int m);

}  // namespace scv
