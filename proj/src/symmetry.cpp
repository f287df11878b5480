#include "scv/symmetry.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace scv {

SymmetricOperator::SymmetricOperator(Matrix s, std::vector<Matrix> projectors, std::vector<double> labels)
    : s_(std::move(s)), projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty() || projectors_.size() != labels_.size()) {
    throw std::invalid_argument("SymmetricOperator: need one label per projector");
  }
  n_ = qubits_of(s_.rows());
  const Eigen::Index d = s_.rows();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    if (i > 0 && !(labels_[i - 1] < labels_[i])) throw std::invalid_argument("SymmetricOperator: labels not ascending");
    for (std::size_t j = 0; j < projectors_.size(); ++j) {
      Matrix prod = projectors_[i] * projectors_[j];
      Matrix want = (i == j) ? projectors_[i] : Matrix::Zero(d, d);
      if ((prod - want).norm() > 1e-10 * d) throw std::invalid_argument("SymmetricOperator: projectors not orthogonal");
    }
    sum += projectors_[i];
  }
  if ((sum - Matrix::Identity(d, d)).norm() > 1e-10 * d) {
    throw std::invalid_argument("SymmetricOperator: projectors do not sum to identity");
  }
}

int SymmetricOperator::ancillas() const {
  int m = 0;
  while ((1 << m) < num_spaces()) ++m;
  return m;
}

SymmetricOperator eigenspace_projectors(const Matrix& s, double cluster_tol) {
  if (!is_hermitian(s, 1e-10)) throw std::invalid_argument("eigenspace_projectors: input is not Hermitian");
  if (cluster_tol < 0) cluster_tol = 1e-8 * std::max(1.0, s.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
  const auto& ev = es.eigenvalues();
  std::vector<Matrix> projectors;
  std::vector<double> labels;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= ev.size(); ++k) {
    if (k == ev.size() || ev(k) - ev(k - 1) > cluster_tol) {
      Matrix v = es.eigenvectors().middleCols(start, k - start);
      projectors.push_back(v * v.adjoint());
      labels.push_back(ev.segment(start, k - start).mean());
      start = k;
    }
  }
  return SymmetricOperator(s, std::move(projectors), std::move(labels));
}

PhaseOperator build_v_s(const SymmetricOperator& sym) {
  const int m = sym.ancillas();
  const double denom = std::pow(2.0, m);
  const Eigen::Index d = sym.matrix().rows();
  Matrix v = Matrix::Zero(d, d);
  for (int j = 0; j < sym.num_spaces(); ++j) {
    v += std::polar(1.0, 2.0 * std::numbers::pi * j / denom) * sym.projectors()[j];
  }
  return {sym.n(), v};
}

SymmetricOperator particle_number_symmetry(int n) {
  if (n < 1) throw std::invalid_argument("particle_number_symmetry: n must be positive");
  require_qubits(n, "particle_number_symmetry");
  const Eigen::Index d = Eigen::Index{1} << n;
  std::vector<Matrix> projectors(n + 1, Matrix::Zero(d, d));
  Matrix number = Matrix::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) {
    const int w = std::popcount(static_cast<std::uint64_t>(x));
    projectors[w](x, x) = 1.0;
    number(x, x) = w;
  }
  std::vector<double> labels;
  for (int w = 0; w <= n; ++w) labels.push_back(w);
  return SymmetricOperator(number, std::move(projectors), std::move(labels));
}

SymmetricOperator pauli_symmetry(const PauliString& p) {
  Matrix pm = p.phaseless().to_matrix();
  const Eigen::Index d = pm.rows();
  Matrix id = Matrix::Identity(d, d);
  if (p.is_identity()) return SymmetricOperator(pm, {id}, {1.0});
  return SymmetricOperator(pm, {0.5 * (id - pm), 0.5 * (id + pm)}, {-1.0, 1.0});
}

KrausChannel block_decompose(const SymmetricOperator& sym, const KrausChannel& channel) {
  if (channel.n_in() != sym.n() || channel.n_out() != sym.n()) {
    throw dimension_error("block_decompose: channel and symmetry dimensions differ");
  }
  std::vector<Matrix> ks;
  for (const auto& k : channel.kraus_ops()) {
    Matrix out = Matrix::Zero(k.rows(), k.cols());
    for (const auto& p : sym.projectors()) out.noalias() += p * k * p;
    if (out.norm() >= kKrausPrune) ks.push_back(std::move(out));
  }
  return KrausChannel(sym.n(), sym.n(), std::move(ks));
}

Matrix block_decompose_apply(const SymmetricOperator& sym, const KrausChannel& channel, const Matrix& a) {
  const auto& ps = sym.projectors();
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (const auto& pi : ps)
    for (const auto& pj : ps) out += pi * channel.apply(pi * a * pj) * pj;
  return out;
}

bool check_symmetric(const Matrix& u, const SymmetricOperator& sym, double tol) {
  if (u.rows() != sym.matrix().rows()) throw dimension_error("check_symmetric: dimension mismatch");
  return (u * sym.matrix() - sym.matrix() * u).norm() <= tol;
}

}  // namespace scv
