#pragma once

#include <array>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "scv/linalg.hpp"

/// Independent dense reference implementations used by the tests.
namespace oracle {

using scv::Matrix;
using scv::Rng;

/// Kronecker product of the 2x2 Pauli matrices named by `letters` (leftmost factor first).
Matrix pauli(const std::string& letters);
/// All 4^n letter strings in lexicographic IXYZ order.
std::vector<std::string> all_paulis(int n);
int weight(const std::string& letters);
/// Letters of the Pauli proportional to `m`, or "" when `m` is not a scaled Pauli.
std::string identify(const Matrix& m);

/// Paulis commuting with every member of `set`, by dense matrix products.
std::set<std::string> commutant(const std::vector<std::string>& set);
/// Group closure of `gens` by dense products, phases dropped.
std::set<std::string> group(const std::vector<std::string>& gens);

/// Unnormalized Choi matrix sum_ij |i><j| ⊗ f(|i><j|).
Matrix choi_of_map(int n, const std::function<Matrix(const Matrix&)>& f);
Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho);

/// Literal sum_ij P_i E(P_i rho P_j) P_j.
Matrix projector_detect(const std::vector<Matrix>& projectors, const std::vector<Matrix>& kraus, const Matrix& rho);
/// Kraus operators averaged over a Pauli group: K -> |G|^-1 sum_g g K g.
Matrix group_detect(const std::vector<Matrix>& group, const std::vector<Matrix>& kraus, const Matrix& rho);

/// Random Kraus list with sum K^dagger K = I.
std::vector<Matrix> random_channel(int n, int count, Rng& rng);
Matrix random_hermitian(int dim, Rng& rng);
/// Eigenprojectors of a random Hermitian with the given multiplicities.
std::vector<Matrix> random_projectors(int n, const std::vector<int>& multiplicities, Rng& rng);
/// exp(i H) with H block diagonal in the given projectors.
Matrix random_block_unitary(const std::vector<Matrix>& projectors, Rng& rng);

/// Dense (1+n)-qubit simulation of the single-ancilla virtual circuit; ancilla is the leading qubit.
Matrix virtual_circuit(const std::array<std::string, 4>& paulis, const std::vector<Matrix>& kraus, const Matrix& rho,
                       double p_idle);

/// Minimal lambda over a grid of stabilizer mixtures (coarse, for cross-checks only).
double grid_robustness(const std::array<double, 3>& r, int steps);
double grid_weight(const std::array<double, 3>& r, int steps);

/// Trace distance from eigenvalues of the Hermitian difference.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace oracle
