#include "scv/clifford_limits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "json.hpp"

namespace scv {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kBoundaryTol = 1e-12;

using Vec3 = std::array<double, 3>;

double norm2(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

/// Euclidean projection of v onto the l1 ball of radius c (sort-based threshold search).
Vec3 project_l1(const Vec3& v, double c) {
  const double l1 = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
  if (l1 <= c) return v;
  if (c <= 0.0) return {0.0, 0.0, 0.0};
  std::array<double, 3> u{std::abs(v[0]), std::abs(v[1]), std::abs(v[2])};
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, shift = 0.0;
  for (int k = 0; k < 3; ++k) {
    cumsum += u[k];
    const double t = (cumsum - c) / (k + 1);
    if (u[k] - t > 0.0) shift = t;
  }
  Vec3 w{};
  for (int k = 0; k < 3; ++k) w[k] = std::copysign(std::max(std::abs(v[k]) - shift, 0.0), v[k]);
  return w;
}

/// Smallest eigenvalue of (a I + b.sigma)/2 computed from the explicit 2x2 matrix.
double min_eig_2x2(double a, const Vec3& b) {
  Eigen::Matrix2cd m;
  m << a + b[2], cplx(b[0], -b[1]), cplx(b[0], b[1]), a - b[2];
  m *= 0.5;
  const double tr = m.trace().real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  return 0.5 * tr - std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
}

std::array<double, 6> octahedron_weights(const Vec3& s) {
  const double slack = std::max(0.0, 1.0 - std::abs(s[0]) - std::abs(s[1]) - std::abs(s[2]));
  std::array<double, 6> w{};
  for (int k = 0; k < 3; ++k) {
    w[2 * k] = std::max(s[k], 0.0) + slack / 6.0;
    w[2 * k + 1] = std::max(-s[k], 0.0) + slack / 6.0;
  }
  return w;
}

void check_bloch(const Vec3& r) {
  if (norm2(r) > 1.0 + 1e-12) throw std::domain_error("Bloch vector outside the unit ball");
}

/// Bracketing grid followed by bisection on a monotone feasibility predicate.
/// `feasible` is true on [lo, boundary] when `ascending` is false, and on [boundary, hi] otherwise.
double grid_refine(double lo, double hi, bool ascending, double tol, const std::function<bool(double)>& feasible) {
  constexpr int kGrid = 64;
  double a = lo, b = hi;
  if (ascending) {
    if (feasible(lo)) return lo;
    for (int i = 1; i <= kGrid; ++i) {
      const double v = lo + (hi - lo) * i / kGrid;
      if (feasible(v)) {
        a = lo + (hi - lo) * (i - 1) / kGrid;
        b = v;
        break;
      }
    }
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      (feasible(mid) ? b : a) = mid;
    }
    return b;
  }
  if (feasible(hi)) return hi;
  for (int i = kGrid - 1; i >= 0; --i) {
    const double v = lo + (hi - lo) * i / kGrid;
    if (feasible(v)) {
      a = v;
      b = lo + (hi - lo) * (i + 1) / kGrid;
      break;
    }
  }
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    (feasible(mid) ? a : b) = mid;
  }
  return a;
}

void check_probabilities(double p0, double px, double py, double pz) {
  for (double p : {p0, px, py, pz})
    if (!(p >= 0.0)) throw std::invalid_argument("Pauli noise probabilities must be nonnegative");
  if (std::abs(p0 + px + py + pz - 1.0) > 1e-9) throw std::invalid_argument("Pauli noise probabilities must sum to 1");
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 4 + 1e-12)) {
    throw std::domain_error("theta outside [0, pi/4]");
  }
}

template <class F>
double combine(double theta, double p0, double px, double py, double pz, F measure) {
  check_probabilities(p0, px, py, pz);
  const double q0 = p0 + pz, q1 = px + py;
  double total = 0.0;
  // A block with zero probability contributes nothing.
  if (q0 > 0.0) total += q0 * measure(SingleQubitXYState{theta, pz / q0}).value;
  if (q1 > 0.0) total += q1 * measure(SingleQubitXYState{theta, py / q1}).value;
  return total;
}

}  // namespace

double SingleQubitXYState::x() const { return std::abs(1.0 - 2.0 * p) * std::cos(theta); }
double SingleQubitXYState::y() const { return std::abs(1.0 - 2.0 * p) * std::sin(theta); }

void SingleQubitXYState::validate() const {
  check_theta(theta);
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("flip probability outside [0, 1]");
}

std::string BoundReport::to_json() const {
  nlohmann::json j{{"theta", theta},
                   {"p0", p0},
                   {"px", px},
                   {"py", py},
                   {"pz", pz},
                   {"robustness_bound", robustness_bound},
                   {"weight_bound", weight_bound},
                   {"achieved_fidelity", achieved_fidelity},
                   {"saturated", saturated},
                   {"residual_distance", residual_distance}};
  return j.dump(2);
}

RobustnessResult robustness_closed(const SingleQubitXYState& s) {
  s.validate();
  const double x = s.x(), y = s.y();
  if (y <= 1.0 - x + kBoundaryTol) return {1.0, "stabilizer", {}};
  return {(kSqrt2 + x + y) / (kSqrt2 + 1.0), "edge", {}};
}

double robustness_main_text(const SingleQubitXYState& s) {
  s.validate();
  return std::max((2.0 - kSqrt2) * (1.0 + std::abs(1.0 - 2.0 * s.p) * std::cos(s.theta - std::numbers::pi / 4)), 1.0);
}

RobustnessResult weight_closed(const SingleQubitXYState& s) {
  s.validate();
  const double x = s.x(), y = s.y();
  if (y <= 1.0 - x + kBoundaryTol) return {1.0, "stabilizer", {}};
  if (y <= (kSqrt2 + 1.0) * (1.0 - x)) return {(kSqrt2 - (x + y)) / (kSqrt2 - 1.0), "edge", {}};
  return {(1.0 - (x * x + y * y)) / (2.0 * (1.0 - x)), "cap", {}};
}

RobustnessResult robustness_bruteforce_bloch(const Vec3& r, double tol) {
  check_bloch(r);
  Vec3 best{};
  auto feasible = [&](double lambda) {
    const Vec3 t = project_l1(r, lambda);
    const Vec3 diff{t[0] - r[0], t[1] - r[1], t[2] - r[2]};
    if (min_eig_2x2(lambda - 1.0, diff) < -1e-13) return false;
    best = {t[0] / lambda, t[1] / lambda, t[2] / lambda};
    return true;
  };
  // The maximally magic single-qubit state has robustness below 2, so [1, 3] brackets every input.
  const double value = grid_refine(1.0, 3.0, true, tol, feasible);
  feasible(value);
  return {value, "bruteforce", octahedron_weights(best)};
}

RobustnessResult robustness_bruteforce(const SingleQubitXYState& s, double tol) {
  s.validate();
  return robustness_bruteforce_bloch({s.x(), s.y(), 0.0}, tol);
}

RobustnessResult weight_bruteforce_bloch(const Vec3& r, double tol) {
  check_bloch(r);
  Vec3 best{};
  auto feasible = [&](double lambda) {
    if (lambda <= 0.0) return true;
    const Vec3 t = project_l1(r, lambda);
    const Vec3 diff{r[0] - t[0], r[1] - t[1], r[2] - t[2]};
    if (min_eig_2x2(1.0 - lambda, diff) < -1e-13) return false;
    best = {t[0] / lambda, t[1] / lambda, t[2] / lambda};
    return true;
  };
  const double value = grid_refine(0.0, 1.0, false, tol, feasible);
  feasible(value);
  return {value, "bruteforce", octahedron_weights(best)};
}

RobustnessResult weight_bruteforce(const SingleQubitXYState& s, double tol) {
  s.validate();
  return weight_bruteforce_bloch({s.x(), s.y(), 0.0}, tol);
}

double channel_robustness(double theta, double p0, double px, double py, double pz) {
  return combine(theta, p0, px, py, pz, robustness_closed);
}

double channel_weight(double theta, double p0, double px, double py, double pz) {
  return combine(theta, p0, px, py, pz, weight_closed);
}

KrausChannel noisy_rz(double theta, double p0, double px, double py, double pz) {
  check_probabilities(p0, px, py, pz);
  Matrix rz = Matrix::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, -theta / 2);
  rz(1, 1) = std::polar(1.0, theta / 2);
  std::vector<Matrix> kraus;
  const std::array<std::pair<double, const char*>, 4> terms{{{p0, "I"}, {px, "X"}, {py, "Y"}, {pz, "Z"}}};
  for (const auto& [p, name] : terms)
    if (p > 0.0) kraus.push_back(std::sqrt(p) * PauliString::from_string(name).to_matrix() * rz);
  return KrausChannel(1, 1, kraus);
}

namespace {

KrausChannel corrected_rz(double theta, double p0, double px, double py, double pz) {
  const GeneratingSet gens(1, {PauliString::from_string("Z")});
  FeedbackPolicy policy;
  policy.n = 1;
  policy.corrections.emplace(0, PauliString::from_string("I"));
  policy.corrections.emplace(1, PauliString::from_string("X"));
  return scv_correct(gens, noisy_rz(theta, p0, px, py, pz), policy);
}

}  // namespace

BoundReport fidelity_bounds(double theta, double p0, double px, double py, double pz) {
  check_theta(theta);
  check_probabilities(p0, px, py, pz);
  BoundReport r;
  r.theta = theta;
  r.p0 = p0;
  r.px = px;
  r.py = py;
  r.pz = pz;
  r.robustness_bound = 0.5 * (1.0 + std::cos(theta)) * channel_robustness(theta, p0, px, py, pz);
  r.weight_bound = 1.0 - 0.5 * (1.0 - std::cos(theta)) * channel_weight(theta, p0, px, py, pz);
  const KrausChannel ideal = noisy_rz(theta, 1.0, 0.0, 0.0, 0.0);
  r.achieved_fidelity = worst_case_fidelity(corrected_rz(theta, p0, px, py, pz), ideal);
  r.saturated = std::abs(r.achieved_fidelity - std::min(r.robustness_bound, r.weight_bound)) <= 1e-9;
  return r;
}

BoundReport saturation_check(double theta, double p0, double px, double py, double pz) {
  BoundReport r = fidelity_bounds(theta, p0, px, py, pz);
  const double q = py + pz;
  r.residual_distance = choi_distance(corrected_rz(theta, p0, px, py, pz), noisy_rz(theta, 1.0 - q, 0.0, 0.0, q));
  return r;
}

bool theorem3_condition(const PauliSet& noise_paulis, const PauliSet& h_terms) {
  if (noise_paulis.empty()) return true;
  const PauliSet q_h = generated_group(h_terms.n(), h_terms.members());
  PauliSet det(noise_paulis.n());
  for (const auto& p : noise_paulis)
    if (!p.is_identity()) det.insert(p);
  return det.intersect(q_h).empty();
}

bool theorem4_condition(const PauliSet& noise_paulis, const PauliSet& h_terms) {
  if (noise_paulis.empty()) return true;
  const PauliSet q_h = generated_group(h_terms.n(), h_terms.members());
  return correction_products(noise_paulis).intersect(q_h).empty();
}

CovariantReport covariant_condition(const PauliSet& h_prime_terms, const PauliSet& p_cor) {
  CovariantReport rep;
  for (const auto& q : h_prime_terms)
    if (!p_cor.contains(q)) rep.preserved_terms.push_back(q);
  rep.possible = !rep.preserved_terms.empty();
  return rep;
}

}  // namespace scv
