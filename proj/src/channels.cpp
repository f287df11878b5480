#include "scv/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scv {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0,1]");
}

}  // namespace

DensityOperator::DensityOperator(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw dimension_error("DensityOperator: matrix is not square");
  n_ = qubits_of(m_.rows());
  if (!is_hermitian(m_, tol)) throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
  const double tr = m_.trace().real();
  if (tr <= 0.0 || tr > 1.0 + tol) throw std::invalid_argument("DensityOperator: trace outside (0,1]");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("DensityOperator: matrix is not PSD");
}

DensityOperator DensityOperator::normalized() const {
  DensityOperator d = *this;
  d.m_ /= trace();
  return d;
}

KrausChannel::KrausChannel(int n_in, int n_out, std::vector<Matrix> kraus)
    : n_in_(n_in), n_out_(n_out), kraus_(std::move(kraus)) {
  const Eigen::Index din = Eigen::Index{1} << n_in, dout = Eigen::Index{1} << n_out;
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) throw dimension_error("KrausChannel: Kraus operator has wrong shape");
  }
}

KrausChannel KrausChannel::identity(int n) {
  return KrausChannel(n, n, {Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n)});
}

KrausChannel KrausChannel::unitary(const Matrix& u) {
  const int n = qubits_of(u.rows());
  return KrausChannel(n, n, {u});
}

Matrix KrausChannel::effect() const {
  const Eigen::Index din = Eigen::Index{1} << n_in_;
  Matrix e = Matrix::Zero(din, din);
  for (const auto& k : kraus_) e.noalias() += k.adjoint() * k;
  return e;
}

bool KrausChannel::is_trace_preserving(double tol) const {
  const Eigen::Index din = Eigen::Index{1} << n_in_;
  return (effect() - Matrix::Identity(din, din)).norm() <= tol * din;
}

bool KrausChannel::is_trace_non_increasing(double tol) const {
  const Eigen::Index din = Eigen::Index{1} << n_in_;
  Matrix gap = Matrix::Identity(din, din) - effect();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gap + gap.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix KrausChannel::apply(const Matrix& a) const {
  const Eigen::Index din = Eigen::Index{1} << n_in_, dout = Eigen::Index{1} << n_out_;
  if (a.rows() != din || a.cols() != din) throw dimension_error("KrausChannel::apply: dimension mismatch");
  Matrix out = Matrix::Zero(dout, dout);
  for (const auto& k : kraus_) out.noalias() += k * a * k.adjoint();
  return out;
}

KrausChannel KrausChannel::scaled(double factor) const {
  std::vector<Matrix> ks;
  for (const auto& k : kraus_) ks.push_back(factor * k);
  return KrausChannel(n_in_, n_out_, std::move(ks));
}

TraceNonIncreasingMap::TraceNonIncreasingMap(KrausChannel inner) : inner_(std::move(inner)) {
  if (!inner_.is_trace_non_increasing(1e-9)) {
    throw std::invalid_argument("TraceNonIncreasingMap: map increases trace");
  }
}

NoiseModel NoiseModel::pauli_noise(std::vector<std::pair<double, PauliString>> terms) {
  NoiseModel m;
  m.kind = Kind::pauli;
  m.paulis = std::move(terms);
  return m;
}

NoiseModel NoiseModel::local_depolarizing(double p) {
  NoiseModel m;
  m.kind = Kind::local_depolarizing;
  m.p_err = p;
  return m;
}

NoiseModel NoiseModel::global_depolarizing(double q) {
  NoiseModel m;
  m.kind = Kind::global_depolarizing;
  m.p_err = q;
  return m;
}

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho) {
  Matrix out = channel.apply(rho.matrix());
  return DensityOperator(0.5 * (out + out.adjoint()), 1e-9);
}

KrausChannel compose(const KrausChannel& a, const KrausChannel& b) {
  if (a.n_in() != b.n_out()) throw dimension_error("compose: inner dimensions differ");
  std::vector<Matrix> ks;
  ks.reserve(a.kraus_ops().size() * b.kraus_ops().size());
  for (const auto& ka : a.kraus_ops()) {
    for (const auto& kb : b.kraus_ops()) {
      Matrix k = ka * kb;
      if (k.norm() >= kKrausPrune) ks.push_back(std::move(k));
    }
  }
  return KrausChannel(b.n_in(), a.n_out(), std::move(ks));
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> ks;
  for (const auto& ka : a.kraus_ops())
    for (const auto& kb : b.kraus_ops()) ks.push_back(kron(ka, kb));
  return KrausChannel(a.n_in() + b.n_in(), a.n_out() + b.n_out(), std::move(ks));
}

KrausChannel add(const KrausChannel& a, const KrausChannel& b) {
  if (a.n_in() != b.n_in() || a.n_out() != b.n_out()) throw dimension_error("add: dimensions differ");
  auto ks = a.kraus_ops();
  ks.insert(ks.end(), b.kraus_ops().begin(), b.kraus_ops().end());
  return KrausChannel(a.n_in(), a.n_out(), std::move(ks));
}

Matrix choi(const KrausChannel& channel) {
  const Eigen::Index din = Eigen::Index{1} << channel.n_in(), dout = Eigen::Index{1} << channel.n_out();
  Matrix j = Matrix::Zero(din * dout, din * dout);
  // Column vector of (I ⊗ K) sum_i |i>|i> is vec of K laid out input-major.
  for (const auto& k : channel.kraus_ops()) {
    Vector v(din * dout);
    for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    j.noalias() += v * v.adjoint();
  }
  return j;
}

Matrix choi_state(const KrausChannel& channel) {
  return choi(channel) / static_cast<double>(Eigen::Index{1} << channel.n_in());
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.n_in() != b.n_in() || a.n_out() != b.n_out()) throw dimension_error("choi_distance: dimensions differ");
  return (choi_state(a) - choi_state(b)).norm();
}

std::optional<double> proportionality(const KrausChannel& a, const KrausChannel& b, double tol) {
  if (a.n_in() != b.n_in() || a.n_out() != b.n_out()) throw dimension_error("proportionality: dimensions differ");
  Matrix ja = choi_state(a), jb = choi_state(b);
  const double nb = jb.squaredNorm();
  if (nb < 1e-30) {
    if (ja.norm() <= tol) return 0.0;
    return std::nullopt;
  }
  double lambda = (jb.adjoint() * ja).trace().real() / nb;
  if (lambda < 0.0) {
    if (lambda < -tol) return std::nullopt;
    lambda = 0.0;
  }
  if ((ja - lambda * jb).norm() > tol) return std::nullopt;
  return lambda;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw dimension_error("trace_distance: dims differ");
  Matrix d = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const Matrix& rho, const Matrix& sigma, double psd_tol) {
  if (rho.rows() != sigma.rows()) throw dimension_error("fidelity: dims differ");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  if (es.eigenvalues().minCoeff() < -psd_tol) throw std::invalid_argument("fidelity: first argument not PSD");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  // Rank-one shortcut keeps the pure-state case exact.
  if ((ev.array() > 1e-14).count() == 1) {
    Eigen::Index k;
    ev.maxCoeff(&k);
    Vector v = es.eigenvectors().col(k);
    return std::max(0.0, ev(k) * (v.adjoint() * sigma * v)(0, 0).real());
  }
  Matrix sq = es.eigenvectors() * ev.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  Matrix inner = sq * sigma * sq;
  Eigen::SelfAdjointEigenSolver<Matrix> es2(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  if (es2.eigenvalues().minCoeff() < -psd_tol) throw std::invalid_argument("fidelity: second argument not PSD");
  double f = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, f * f);
}

namespace {

// Output of (I ⊗ E) on |psi><psi| with psi laid out reference-major.
Matrix extended_output(const KrausChannel& e, const Vector& psi) {
  const Eigen::Index d = Eigen::Index{1} << e.n_in();
  const Eigen::Index dout = Eigen::Index{1} << e.n_out();
  // psi = sum_{r,s} c_{rs} |r>|s>; reshape into C (d x d), output vector per Kraus is C K^T.
  Matrix c(d, d);
  for (Eigen::Index r = 0; r < d; ++r) c.row(r) = psi.segment(r * d, d).transpose();
  Matrix out = Matrix::Zero(d * dout, d * dout);
  for (const auto& k : e.kraus_ops()) {
    Matrix ck = c * k.transpose();
    Vector v(d * dout);
    for (Eigen::Index r = 0; r < d; ++r) v.segment(r * dout, dout) = ck.row(r).transpose();
    out.noalias() += v * v.adjoint();
  }
  return out;
}

double input_fidelity(const KrausChannel& a, const KrausChannel& b, const Vector& psi) {
  Matrix ra = extended_output(a, psi), rb = extended_output(b, psi);
  return fidelity(ra, rb, 1e-7);
}

}  // namespace

double worst_case_fidelity(const KrausChannel& a, const KrausChannel& b, int restarts, double tol,
                           std::uint64_t seed) {
  if (a.n_in() != b.n_in() || a.n_out() != b.n_out()) throw dimension_error("worst_case_fidelity: dims differ");
  if (a.n_in() > 3) throw std::length_error("worst_case_fidelity: at most 3 qubits");
  const int n = a.n_in();
  const Eigen::Index d = Eigen::Index{1} << n;
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);

  std::vector<Vector> starts;
  Vector phi = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = 1.0;
  starts.push_back(phi / phi.norm());
  for (int r = 0; r < restarts; ++r) starts.push_back(haar_state(2 * n, rng));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    Vector psi = s;
    double f = input_fidelity(a, b, psi);
    double step = 0.3;
    int stall = 0;
    while (step > 1e-7 && stall < 4000) {
      Vector trial = psi;
      for (Eigen::Index i = 0; i < trial.size(); ++i) trial(i) += step * cplx(g(rng), g(rng));
      trial /= trial.norm();
      double ft = input_fidelity(a, b, trial);
      if (ft < f - tol) {
        psi = trial;
        f = ft;
        stall = 0;
      } else if (++stall % 40 == 0) {
        step *= 0.5;
      }
    }
    best = std::min(best, f);
  }
  return best;
}

KrausChannel single_qubit_depolarizing(double p) {
  check_probability(p, "depolarizing");
  std::vector<Matrix> ks;
  for (const char* s : {"I", "X", "Y", "Z"}) {
    double w = (s[0] == 'I') ? 1.0 - p : p / 3.0;
    if (w > 0) ks.push_back(std::sqrt(w) * PauliString::from_string(s).to_matrix());
  }
  return KrausChannel(1, 1, std::move(ks));
}

KrausChannel build_noise(const NoiseModel& model, int n) {
  require_qubits(n, "build_noise");
  switch (model.kind) {
    case NoiseModel::Kind::pauli: {
      double total = 0;
      std::vector<Matrix> ks;
      PauliSet seen(n);
      for (const auto& [p, pauli] : model.paulis) {
        if (pauli.n() != n) throw dimension_error("build_noise: Pauli qubit count mismatch");
        if (p < 0) throw std::invalid_argument("build_noise: negative probability");
        total += p;
      }
      if (total > 1.0 + 1e-12) throw std::invalid_argument("build_noise: probabilities sum above 1");
      double p_identity = std::max(0.0, 1.0 - total);
      if (p_identity > 0) ks.push_back(std::sqrt(p_identity) * Matrix::Identity(1 << n, 1 << n));
      for (const auto& [p, pauli] : model.paulis)
        if (p > 0) ks.push_back(std::sqrt(p) * pauli.phaseless().to_matrix());
      return KrausChannel(n, n, std::move(ks));
    }
    case NoiseModel::Kind::local_depolarizing: {
      KrausChannel one = single_qubit_depolarizing(model.p_err);
      KrausChannel out = KrausChannel::identity(0);
      for (int q = 0; q < n; ++q) out = tensor(out, one);
      return out;
    }
    case NoiseModel::Kind::global_depolarizing: {
      check_probability(model.p_err, "global depolarizing");
      const double q = model.p_err;
      const double d2 = std::pow(4.0, n);
      std::vector<Matrix> ks;
      const std::uint64_t dim = std::uint64_t{1} << n;
      for (std::uint64_t x = 0; x < dim; ++x) {
        for (std::uint64_t z = 0; z < dim; ++z) {
          double w = q / d2 + ((x == 0 && z == 0) ? 1.0 - q : 0.0);
          if (w > 0) ks.push_back(std::sqrt(w) * PauliString(n, x, z).to_matrix());
        }
      }
      return KrausChannel(n, n, std::move(ks));
    }
  }
  throw std::logic_error("build_noise: unknown kind");
}

void apply_depolarizing_qubit(Matrix& a, int n, int qubit, double p) {
  // D(a) = (1 - 4p/3) a + (2p/3) Tr_q(a) ⊗ I_q.
  const std::uint64_t b = std::uint64_t{1} << (n - 1 - qubit);
  const double keep = 1.0 - 4.0 * p / 3.0, mix = 2.0 * p / 3.0;
  const Eigen::Index dim = a.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const std::uint64_t uc = static_cast<std::uint64_t>(c);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const std::uint64_t ur = static_cast<std::uint64_t>(r);
      if ((ur & b) != (uc & b)) {
        a(r, c) *= keep;
      } else if (!(ur & b)) {
        const Eigen::Index r1 = static_cast<Eigen::Index>(ur | b), c1 = static_cast<Eigen::Index>(uc | b);
        const cplx t = mix * (a(r, c) + a(r1, c1));
        a(r, c) = keep * a(r, c) + t;
        a(r1, c1) = keep * a(r1, c1) + t;
      }
    }
  }
}

void apply_local_depolarizing(Matrix& a, int n, double p) {
  check_probability(p, "local depolarizing");
  if (p == 0.0) return;
  for (int q = 0; q < n; ++q) apply_depolarizing_qubit(a, n, q, p);
}

void apply_pauli_qubit(Matrix& a, int n, int qubit, const std::array<double, 4>& w) {
  // With a = [[A, B], [C, D]] split on this qubit: X -> [[D, C], [B, A]], Y -> [[D, -C], [-B, A]], Z -> [[A, -B], [-C, D]].
  const std::uint64_t b = std::uint64_t{1} << (n - 1 - qubit);
  const double same_keep = w[0] + w[3], same_swap = w[1] + w[2];
  const double off_keep = w[0] - w[3], off_swap = w[1] - w[2];
  const Eigen::Index dim = a.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const std::uint64_t uc = static_cast<std::uint64_t>(c);
    if (uc & b) continue;
    const Eigen::Index c1 = static_cast<Eigen::Index>(uc | b);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const std::uint64_t ur = static_cast<std::uint64_t>(r);
      if (ur & b) continue;
      const Eigen::Index r1 = static_cast<Eigen::Index>(ur | b);
      const cplx A = a(r, c), B = a(r, c1), C = a(r1, c), D = a(r1, c1);
      a(r, c) = same_keep * A + same_swap * D;
      a(r1, c1) = same_keep * D + same_swap * A;
      a(r, c1) = off_keep * B + off_swap * C;
      a(r1, c) = off_keep * C + off_swap * B;
    }
  }
}

void apply_global_depolarizing(Matrix& a, double q) {
  check_probability(q, "global depolarizing");
  const cplx tr = a.trace();
  a *= (1.0 - q);
  a.diagonal().array() += q * tr / static_cast<double>(a.rows());
}

void apply_pauli_channel(Matrix& a, const std::vector<std::pair<double, PauliString>>& terms) {
  double total = 0;
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (const auto& [p, pauli] : terms) {
    total += p;
    out += p * conjugate(pauli.phaseless(), a);
  }
  out += std::max(0.0, 1.0 - total) * a;
  a = std::move(out);
}

}  // namespace scv
