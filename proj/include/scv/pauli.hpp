#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace scv {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Thrown when two operands act on different numbers of qubits.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief n-qubit Pauli operator i^phase * (s_0 ⊗ ... ⊗ s_{n-1}) in symplectic form.
 *
 * Each factor s_q is the Hermitian Pauli selected by (x_q, z_q): I, X, Z, or Y
 * for (1,1). Qubit 0 is the leftmost tensor factor and the most significant
 * bit of a computational basis index, so bit (n-1-q) of a mask belongs to
 * qubit q. Y = iXZ is used when converting to the X^x Z^z form.
 */
class PauliString {
 public:
  PauliString() = default;
  PauliString(int n, std::uint64_t x_mask, std::uint64_t z_mask, int phase = 0);

  static PauliString identity(int n) { return PauliString(n, 0, 0, 0); }
  /// Parses "+XYZ", "-iXX", "IZI", ... (optional sign, optional i).
  static PauliString from_string(const std::string& s);
  /// Single-qubit factor `c` in {I,X,Y,Z} on qubit q.
  static PauliString single(int n, int q, char c);

  int n() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase() const { return phase_; }

  char factor(int q) const;
  std::uint64_t bit(int q) const { return std::uint64_t{1} << (n_ - 1 - q); }

  PauliString phaseless() const { return PauliString(n_, x_, z_, 0); }
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Letters only, e.g. "XZI".
  std::string letters() const;
  /// Signed form, e.g. "-iXZ".
  std::string str() const;

  Matrix to_matrix() const;

  /// Coefficient c(j) with P|j> = c(j)|j ^ x_mask>.
  cplx column_coeff(std::uint64_t j) const;

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
  }
  bool same_up_to_phase(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
  }
  /// Order on (x, z) ignoring phase; used for deterministic set ordering.
  bool key_less(const PauliString& o) const {
    return x_ != o.x_ ? x_ < o.x_ : z_ < o.z_;
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

PauliString multiply(const PauliString& p, const PauliString& q);
bool commutes(const PauliString& p, const PauliString& q);
int weight(const PauliString& p);

/// Deduplicated collection of phaseless Paulis, kept sorted by (x, z).
class PauliSet {
 public:
  PauliSet() = default;
  explicit PauliSet(int n) : n_(n) {}
  PauliSet(int n, const std::vector<PauliString>& members);

  int n() const { return n_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<PauliString>& members() const { return members_; }

  bool contains(const PauliString& p) const;
  void insert(const PauliString& p);
  PauliSet intersect(const PauliSet& o) const;
  bool subset_of(const PauliSet& o) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  int n_ = 0;
  std::vector<PauliString> members_;
};

/// GF(2)-independent generators (phase ignored).
class GeneratingSet {
 public:
  GeneratingSet() = default;
  explicit GeneratingSet(int n) : n_(n) {}
  /// Throws std::invalid_argument if the generators are dependent.
  GeneratingSet(int n, const std::vector<PauliString>& gens);
  /// Keeps an independent subset of `paulis` (first-come order).
  static GeneratingSet reduce(int n, const std::vector<PauliString>& paulis);

  int n() const { return n_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<PauliString>& generators() const { return gens_; }

 private:
  int n_ = 0;
  std::vector<PauliString> gens_;
};

/// GF(2) rank of the symplectic vectors of `paulis`.
int gf2_rank(const std::vector<PauliString>& paulis);

std::vector<std::pair<cplx, PauliString>> pauli_expansion(const Matrix& m, double tol = 1e-10);
PauliSet generated_group(const GeneratingSet& gens);
PauliSet generated_group(int n, const std::vector<PauliString>& paulis);
GeneratingSet commutant(const PauliSet& s);
PauliSet q_u_prime(const Matrix& u, double tol = 1e-10);

/// Left/right multiplication of a dense operator by a Pauli without forming the Pauli matrix.
Matrix apply_left(const PauliString& p, const Matrix& a);
Matrix apply_right(const Matrix& a, const PauliString& p);
/// p a p^dagger.
Matrix conjugate(const PauliString& p, const Matrix& a);

}  // namespace scv
