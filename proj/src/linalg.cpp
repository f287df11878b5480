#include "scv/linalg.hpp"

#include <cmath>
#include <string>

namespace scv {

void require_qubits(int total, const char* where) {
  if (total > kMaxQubits) {
    throw std::length_error(std::string(where) + ": " + std::to_string(total) +
                            " qubits exceeds the dense-simulation cap of " + std::to_string(kMaxQubits));
  }
}

int qubits_of(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw dimension_error("dimension is not a power of two");
  return n;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

bool is_unitary(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.adjoint() * a - Matrix::Identity(a.rows(), a.cols())).norm() <= tol * a.rows();
}

Matrix expi_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector ph = (cplx(0, t) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix sqrt_psd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix partial_trace_second(const Matrix& a, int n_a, int n_b) {
  const Eigen::Index da = Eigen::Index{1} << n_a, db = Eigen::Index{1} << n_b;
  if (a.rows() != da * db) throw dimension_error("partial_trace_second: dimension mismatch");
  Matrix out = Matrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out(i, j) = a.block(i * db, j * db, db, db).trace();
  return out;
}

Matrix partial_trace_first(const Matrix& a, int n_a, int n_b) {
  const Eigen::Index da = Eigen::Index{1} << n_a, db = Eigen::Index{1} << n_b;
  if (a.rows() != da * db) throw dimension_error("partial_trace_first: dimension mismatch");
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += a.block(i * db, i * db, db, db);
  return out;
}

Vector haar_state(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

Matrix haar_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1);
  }
  return q;
}

Matrix random_density(int n, Rng& rng, int rank) {
  const int dim = 1 << n;
  if (rank <= 0) rank = dim;
  Matrix rho = Matrix::Zero(dim, dim);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double total = 0;
  std::vector<double> w(rank);
  for (auto& x : w) total += (x = u(rng) + 1e-3);
  for (int k = 0; k < rank; ++k) {
    Vector v = haar_state(n, rng);
    rho += (w[k] / total) * v * v.adjoint();
  }
  return rho;
}

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Vector basis_state(int n, std::uint64_t index) {
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

}  // namespace scv
