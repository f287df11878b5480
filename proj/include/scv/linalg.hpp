#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scv/pauli.hpp"

namespace scv {

using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// Largest total qubit count handled by the dense simulator.
inline constexpr int kMaxQubits = 10;

void require_qubits(int total, const char* where);
int qubits_of(Eigen::Index dim);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(const std::vector<Matrix>& factors);

bool is_hermitian(const Matrix& a, double tol = 1e-10);
bool is_unitary(const Matrix& a, double tol = 1e-10);

/// exp(i t H) for Hermitian H via eigendecomposition.
Matrix expi_hermitian(const Matrix& h, double t);
/// Principal square root of a PSD matrix (negative eigenvalues clipped).
Matrix sqrt_psd(const Matrix& a);

/// Partial trace over the trailing `n_b` qubits of a (n_a + n_b)-qubit operator.
Matrix partial_trace_second(const Matrix& a, int n_a, int n_b);
/// Partial trace over the leading `n_a` qubits.
Matrix partial_trace_first(const Matrix& a, int n_a, int n_b);

Vector haar_state(int n, Rng& rng);
Matrix haar_unitary(int dim, Rng& rng);
Matrix random_density(int n, Rng& rng, int rank = 0);
Matrix projector(const Vector& v);

/// |b>, computational basis vector.
Vector basis_state(int n, std::uint64_t index);

}  // namespace scv
