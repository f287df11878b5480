#include "scv/register_sim.hpp"

#include <cmath>
#include <numbers>

namespace scv {

RegisterState::RegisterState(const Matrix& x, int ancillas, bool hermitian)
    : n_(qubits_of(x.rows())), m_(ancillas), hermitian_(hermitian) {
  require_qubits(n_ + m_, "RegisterState");
  blocks_.assign(static_cast<std::size_t>(reg_dim() * reg_dim()), Matrix::Zero(x.rows(), x.cols()));
  block(0, 0) = x;
}

void RegisterState::map_system(const std::function<void(Matrix&)>& f) {
  const Eigen::Index r = reg_dim();
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = hermitian_ ? a : 0; b < r; ++b) {
      Matrix& x = block(a, b);
      if (x.isZero(0.0)) continue;
      f(x);
      if (hermitian_ && a != b) block(b, a) = x.adjoint();
    }
  }
}

void RegisterState::controlled(int k, const Matrix& v) {
  const Eigen::Index r = reg_dim();
  const Matrix vd = v.adjoint();
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      const bool left = (a >> k) & 1, right = (b >> k) & 1;
      if (!left && !right) continue;
      Matrix& x = block(a, b);
      if (left) x = v * x;
      if (right) x = x * vd;
    }
  }
}

void RegisterState::controlled(int k, const PauliString& p) {
  const Eigen::Index r = reg_dim();
  const PauliString pd(p.n(), p.x_mask(), p.z_mask(), (4 - p.phase()) % 4);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      const bool left = (a >> k) & 1, right = (b >> k) & 1;
      Matrix& x = block(a, b);
      if (left) x = apply_left(p, x);
      if (right) x = apply_right(x, pd);
    }
  }
}

void RegisterState::ancilla_gate(int k, const Eigen::Matrix2cd& g) {
  const Eigen::Index r = reg_dim(), bit = Eigen::Index{1} << k;
  std::vector<Matrix> out(blocks_.size());
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      Matrix acc = Matrix::Zero(blocks_[0].rows(), blocks_[0].cols());
      for (int s = 0; s < 2; ++s) {
        const Eigen::Index a2 = (a & ~bit) | (s ? bit : 0);
        const cplx ga = g((a & bit) ? 1 : 0, s);
        if (ga == cplx(0)) continue;
        for (int t = 0; t < 2; ++t) {
          const Eigen::Index b2 = (b & ~bit) | (t ? bit : 0);
          const cplx gb = std::conj(g((b & bit) ? 1 : 0, t));
          if (gb == cplx(0)) continue;
          acc += (ga * gb) * block(a2, b2);
        }
      }
      out[a * r + b] = std::move(acc);
    }
  }
  blocks_ = std::move(out);
}

void RegisterState::ancilla_unitary(const Matrix& w) {
  const Eigen::Index r = reg_dim();
  if (w.rows() != r) throw dimension_error("ancilla_unitary: register dimension mismatch");
  std::vector<Matrix> out(blocks_.size());
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      Matrix acc = Matrix::Zero(blocks_[0].rows(), blocks_[0].cols());
      for (Eigen::Index c = 0; c < r; ++c) {
        if (w(a, c) == cplx(0)) continue;
        for (Eigen::Index d = 0; d < r; ++d) {
          const cplx coeff = w(a, c) * std::conj(w(b, d));
          if (coeff != cplx(0)) acc += coeff * block(c, d);
        }
      }
      out[a * r + b] = std::move(acc);
    }
  }
  blocks_ = std::move(out);
}

void RegisterState::ancilla_diagonal(const std::vector<cplx>& phases) {
  const Eigen::Index r = reg_dim();
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b) block(a, b) *= phases[a] * std::conj(phases[b]);
}

void RegisterState::ancilla_depolarizing(int k, double p) {
  if (p == 0.0) return;
  const Eigen::Index r = reg_dim(), bit = Eigen::Index{1} << k;
  const double keep = 1.0 - 4.0 * p / 3.0, mix = 2.0 * p / 3.0;
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      if ((a & bit) != (b & bit)) {
        block(a, b) *= keep;
      } else if (!(a & bit)) {
        Matrix t = mix * (block(a, b) + block(a | bit, b | bit));
        block(a, b) = keep * block(a, b) + t;
        block(a | bit, b | bit) = keep * block(a | bit, b | bit) + t;
      }
    }
  }
}

void RegisterState::ancilla_channel(int k, const std::vector<Eigen::Matrix2cd>& kraus) {
  std::vector<Matrix> total(blocks_.size(), Matrix::Zero(blocks_[0].rows(), blocks_[0].cols()));
  for (const auto& g : kraus) {
    RegisterState copy = *this;
    copy.ancilla_gate(k, g);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += copy.blocks_[i];
  }
  blocks_ = std::move(total);
}

Matrix RegisterState::trace_ancillas() const {
  Matrix out = Matrix::Zero(blocks_[0].rows(), blocks_[0].cols());
  for (Eigen::Index a = 0; a < reg_dim(); ++a) out += block(a, a);
  return out;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Matrix inverse_qft(int m) {
  const Eigen::Index r = Eigen::Index{1} << m;
  Matrix w(r, r);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index c = 0; c < r; ++c)
      w(k, c) = std::polar(1.0 / std::sqrt(static_cast<double>(r)),
                           -2.0 * std::numbers::pi * static_cast<double>(k * c) / static_cast<double>(r));
  return w;
}

}  // namespace scv
