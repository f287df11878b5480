#include "scv/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace scv {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popcount(std::uint64_t v) { return std::popcount(v); }

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void require_same_n(const PauliString& p, const PauliString& q) {
  if (p.n() != q.n()) {
    throw dimension_error("pauli: qubit count mismatch (" + std::to_string(p.n()) + " vs " +
                          std::to_string(q.n()) + ")");
  }
}

int log2_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw dimension_error("pauli: dimension is not a power of two");
  return n;
}

PauliString unpack(int n, std::uint64_t v) { return PauliString(n, v >> n, v & low_mask(n), 0); }

}  // namespace

PauliString::PauliString(int n, std::uint64_t x_mask, std::uint64_t z_mask, int phase)
    : n_(n), x_(x_mask), z_(z_mask), phase_(((phase % 4) + 4) % 4) {
  if (n < 0 || n > 64) throw std::invalid_argument("pauli: qubit count out of range");
  if ((x_ & ~low_mask(n)) || (z_ & ~low_mask(n))) {
    throw std::invalid_argument("pauli: mask has bits beyond n");
  }
}

PauliString PauliString::from_string(const std::string& s) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    if (s[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < s.size() && s[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  int n = static_cast<int>(s.size() - pos);
  if (n <= 0) throw std::invalid_argument("pauli: empty string");
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    std::uint64_t b = std::uint64_t{1} << (n - 1 - q);
    switch (s[pos + q]) {
      case 'I': case '_': break;
      case 'X': x |= b; break;
      case 'Z': z |= b; break;
      case 'Y': x |= b; z |= b; break;
      default: throw std::invalid_argument("pauli: bad character '" + std::string(1, s[pos + q]) + "'");
    }
  }
  return PauliString(n, x, z, phase);
}

PauliString PauliString::single(int n, int q, char c) {
  std::string s(n, 'I');
  if (q < 0 || q >= n) throw std::out_of_range("pauli: qubit index");
  s[q] = c;
  return from_string(s);
}

char PauliString::factor(int q) const {
  bool x = x_ & bit(q), z = z_ & bit(q);
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

std::string PauliString::letters() const {
  std::string s;
  for (int q = 0; q < n_; ++q) s += factor(q);
  return s;
}

std::string PauliString::str() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  return prefix[phase_] + letters();
}

cplx PauliString::column_coeff(std::uint64_t j) const {
  // i^phase * i^{#Y} * X^x Z^z acting on |j>: Z first gives (-1)^{z.j}.
  int k = phase_ + popcount(x_ & z_) + 2 * (popcount(z_ & j) & 1);
  return kIPow[k & 3];
}

Matrix PauliString::to_matrix() const {
  const std::uint64_t dim = std::uint64_t{1} << n_;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::uint64_t j = 0; j < dim; ++j) m(j ^ x_, j) = column_coeff(j);
  return m;
}

PauliString multiply(const PauliString& p, const PauliString& q) {
  require_same_n(p, q);
  // Work in X^x Z^z form: Z^b X^c = (-1)^{b.c} X^c Z^b.
  int k = p.phase() + q.phase() + popcount(p.x_mask() & p.z_mask()) +
          popcount(q.x_mask() & q.z_mask()) + 2 * popcount(p.z_mask() & q.x_mask());
  std::uint64_t x = p.x_mask() ^ q.x_mask(), z = p.z_mask() ^ q.z_mask();
  k -= popcount(x & z);
  return PauliString(p.n(), x, z, k);
}

bool commutes(const PauliString& p, const PauliString& q) {
  require_same_n(p, q);
  return ((popcount(p.x_mask() & q.z_mask()) + popcount(p.z_mask() & q.x_mask())) & 1) == 0;
}

int weight(const PauliString& p) { return popcount(p.x_mask() | p.z_mask()); }

PauliSet::PauliSet(int n, const std::vector<PauliString>& members) : n_(n) {
  for (const auto& p : members) insert(p);
}

bool PauliSet::contains(const PauliString& p) const {
  if (p.n() != n_) return false;
  auto it = std::lower_bound(members_.begin(), members_.end(), p,
                             [](const PauliString& a, const PauliString& b) { return a.key_less(b); });
  return it != members_.end() && it->same_up_to_phase(p);
}

void PauliSet::insert(const PauliString& p) {
  if (p.n() != n_) throw dimension_error("PauliSet: qubit count mismatch");
  auto q = p.phaseless();
  auto it = std::lower_bound(members_.begin(), members_.end(), q,
                             [](const PauliString& a, const PauliString& b) { return a.key_less(b); });
  if (it == members_.end() || !it->same_up_to_phase(q)) members_.insert(it, q);
}

PauliSet PauliSet::intersect(const PauliSet& o) const {
  PauliSet r(n_);
  for (const auto& p : members_)
    if (o.contains(p)) r.members_.push_back(p);
  return r;
}

bool PauliSet::subset_of(const PauliSet& o) const {
  return std::all_of(members_.begin(), members_.end(), [&](const PauliString& p) { return o.contains(p); });
}

int gf2_rank(const std::vector<PauliString>& paulis) {
  // Row reduction on 128-bit vectors stored as (x, z) pairs.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
  for (const auto& p : paulis) rows.emplace_back(p.x_mask(), p.z_mask());
  int rank = 0;
  for (int col = 0; col < 128 && rank < static_cast<int>(rows.size()); ++col) {
    auto has = [&](const std::pair<std::uint64_t, std::uint64_t>& r) {
      return col < 64 ? (r.first >> col) & 1 : (r.second >> (col - 64)) & 1;
    };
    std::size_t piv = rank;
    while (piv < rows.size() && !has(rows[piv])) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) != rank && has(rows[r])) {
        rows[r].first ^= rows[rank].first;
        rows[r].second ^= rows[rank].second;
      }
    }
    ++rank;
  }
  return rank;
}

GeneratingSet::GeneratingSet(int n, const std::vector<PauliString>& gens) : n_(n) {
  for (const auto& g : gens) {
    if (g.n() != n) throw dimension_error("GeneratingSet: qubit count mismatch");
    gens_.push_back(g.phaseless());
  }
  if (gf2_rank(gens_) != static_cast<int>(gens_.size())) {
    throw std::invalid_argument("GeneratingSet: generators are not independent");
  }
}

GeneratingSet GeneratingSet::reduce(int n, const std::vector<PauliString>& paulis) {
  GeneratingSet g(n);
  for (const auto& p : paulis) {
    if (p.n() != n) throw dimension_error("GeneratingSet: qubit count mismatch");
    if (p.is_identity()) continue;
    g.gens_.push_back(p.phaseless());
    if (gf2_rank(g.gens_) != static_cast<int>(g.gens_.size())) g.gens_.pop_back();
  }
  return g;
}

std::vector<std::pair<cplx, PauliString>> pauli_expansion(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw dimension_error("pauli_expansion: matrix is not square");
  const int n = log2_dim(m.rows());
  if (n > 12) throw dimension_error("pauli_expansion: too many qubits for dense expansion");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::pair<cplx, PauliString>> out;
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t z = 0; z < dim; ++z) {
      PauliString p(n, x, z, 0);
      // tr[m P] = sum_j <j|m P|j> = sum_j m(j, j^x) c(j).
      cplx tr = 0;
      for (std::uint64_t j = 0; j < dim; ++j) tr += m(j, j ^ x) * p.column_coeff(j);
      cplx c = tr / static_cast<double>(dim);
      if (std::abs(c) > tol) out.emplace_back(c, p);
    }
  }
  return out;
}

PauliSet generated_group(const GeneratingSet& gens) {
  return generated_group(gens.n(), gens.generators());
}

PauliSet generated_group(int n, const std::vector<PauliString>& paulis) {
  auto basis = GeneratingSet::reduce(n, paulis).generators();
  if (basis.size() > 24) throw std::length_error("generated_group: group too large to enumerate");
  std::vector<PauliString> elems{PauliString::identity(n)};
  elems.reserve(std::size_t{1} << basis.size());
  for (const auto& g : basis) {
    const std::size_t sz = elems.size();
    for (std::size_t i = 0; i < sz; ++i) elems.push_back(multiply(elems[i], g).phaseless());
  }
  return PauliSet(n, elems);
}

GeneratingSet commutant(const PauliSet& s) {
  const int n = s.n();
  if (n > 32) throw dimension_error("commutant: at most 32 qubits");
  const int cols = 2 * n;
  // Row for P is the functional v -> <P, v> on packed v = (x | z).
  std::vector<std::uint64_t> rows;
  for (const auto& p : s) rows.push_back((p.z_mask() << n) | p.x_mask());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = cols - 1; col >= 0 && rank < static_cast<int>(rows.size()); --col) {
    const std::uint64_t b = std::uint64_t{1} << col;
    std::size_t piv = rank;
    while (piv < rows.size() && !(rows[piv] & b)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (static_cast<int>(r) != rank && (rows[r] & b)) rows[r] ^= rows[rank];
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<PauliString> gens;
  for (int free = cols - 1; free >= 0; --free) {
    if (is_pivot[free]) continue;
    std::uint64_t v = std::uint64_t{1} << free;
    for (int r = 0; r < rank; ++r)
      if (rows[r] & (std::uint64_t{1} << free)) v |= std::uint64_t{1} << pivot_col[r];
    gens.push_back(unpack(n, v));
  }
  return GeneratingSet(n, gens);
}

PauliSet q_u_prime(const Matrix& u, double tol) {
  const int n = log2_dim(u.rows());
  const double dim = static_cast<double>(u.rows());
  Matrix check = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (check.norm() > std::max(tol, 1e-10) * dim) throw std::invalid_argument("q_u_prime: input is not unitary");
  PauliSet s(n);
  // c_Q = tr[uQ]/2^n, so |tr[uQ]| > tol*2^n  <=>  |c_Q| > tol.
  for (const auto& [c, p] : pauli_expansion(u, tol)) s.insert(p);
  return s;
}

Matrix apply_left(const PauliString& p, const Matrix& a) {
  const std::uint64_t x = p.x_mask();
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const std::uint64_t src = static_cast<std::uint64_t>(r) ^ x;
    out.row(r) = p.column_coeff(src) * a.row(static_cast<Eigen::Index>(src));
  }
  return out;
}

Matrix apply_right(const Matrix& a, const PauliString& p) {
  const std::uint64_t x = p.x_mask();
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const std::uint64_t src = static_cast<std::uint64_t>(c) ^ x;
    // (a P)(:, c) = a(:, c^x) * P(c^x, c) = a(:, c^x) * coeff(c).
    out.col(c) = a.col(static_cast<Eigen::Index>(src)) * p.column_coeff(static_cast<std::uint64_t>(c));
  }
  return out;
}

Matrix conjugate(const PauliString& p, const Matrix& a) {
  PauliString dag(p.n(), p.x_mask(), p.z_mask(), (4 - p.phase()) % 4);
  return apply_right(apply_left(p, a), dag);
}

}  // namespace scv
