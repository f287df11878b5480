#pragma once

#include <vector>

#include "scv/channels.hpp"

namespace scv {

/// Hermitian S with its eigenspace projectors, ordered by ascending label.
class SymmetricOperator {
 public:
  SymmetricOperator() = default;
  /// Validates completeness and orthogonality of the projectors (tol 1e-10).
  SymmetricOperator(Matrix s, std::vector<Matrix> projectors, std::vector<double> labels);

  int n() const { return n_; }
  const Matrix& matrix() const { return s_; }
  const std::vector<Matrix>& projectors() const { return projectors_; }
  const std::vector<double>& labels() const { return labels_; }
  int num_spaces() const { return static_cast<int>(projectors_.size()); }
  /// Ancilla count ceil(log2 M).
  int ancillas() const;

 private:
  int n_ = 0;
  Matrix s_;
  std::vector<Matrix> projectors_;
  std::vector<double> labels_;
};

struct PhaseOperator {
  int n = 0;
  Matrix v;
};

SymmetricOperator eigenspace_projectors(const Matrix& s, double cluster_tol = -1.0);
PhaseOperator build_v_s(const SymmetricOperator& sym);
/// Projectors onto fixed Hamming weight; the stored matrix is the number operator sum (I - Z_i)/2.
SymmetricOperator particle_number_symmetry(int n);
/// Eigenspaces of a single Pauli (I ± P)/2, labels -1 and +1.
SymmetricOperator pauli_symmetry(const PauliString& p);

KrausChannel block_decompose(const SymmetricOperator& sym, const KrausChannel& channel);
/// Literal sum_ij Pi_i E(Pi_i a Pi_j) Pi_j on an operator.
Matrix block_decompose_apply(const SymmetricOperator& sym, const KrausChannel& channel, const Matrix& a);
bool check_symmetric(const Matrix& u, const SymmetricOperator& sym, double tol = 1e-9);

}  // namespace scv
