#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "scv/experiments.hpp"

using namespace scv;

TEST(symmetry, eigenspaces_of_sum_z) {
  Matrix s = Matrix::Zero(4, 4);
  s += PauliString::from_string("ZI").to_matrix();
  s += PauliString::from_string("IZ").to_matrix();
  const SymmetricOperator sym = eigenspace_projectors(s);
  ASSERT_EQ(sym.num_spaces(), 3);
  EXPECT_EQ(sym.ancillas(), 2);
  EXPECT_NEAR(sym.labels()[0], -2.0, 1e-12);
  EXPECT_NEAR(sym.projectors()[1].trace().real(), 2.0, 1e-12);
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& p : sym.projectors()) sum += p;
  EXPECT_LT((sum - Matrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(symmetry, rejects_incomplete_projectors) {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 1.0;
  EXPECT_THROW(SymmetricOperator(Matrix::Identity(2, 2), {p}, {1.0}), std::invalid_argument);
}

TEST(symmetry, phase_operator_eigenvalues) {
  const SymmetricOperator sym = particle_number_symmetry(3);
  ASSERT_EQ(sym.num_spaces(), 4);
  const PhaseOperator v = build_v_s(sym);
  for (int j = 0; j < sym.num_spaces(); ++j) {
    const Matrix& pj = sym.projectors()[static_cast<std::size_t>(j)];
    const std::complex<double> phase = std::polar(1.0, 2 * std::numbers::pi * j / 4.0);
    EXPECT_LT((v.v * pj - phase * pj).norm(), 1e-12) << j;
  }
}

TEST(symmetry, block_decompose_matches_literal_sum) {
  Rng rng(10);
  const auto projs = oracle::random_projectors(2, {1, 2, 1}, rng);
  Matrix s = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < projs.size(); ++i) s += static_cast<double>(i) * projs[i];
  const SymmetricOperator sym = eigenspace_projectors(s);
  const auto ks = oracle::random_channel(2, 2, rng);
  const KrausChannel ch(2, 2, ks);
  const Matrix rho = random_density(2, rng);
  const Matrix ref = oracle::projector_detect(projs, ks, rho);
  EXPECT_LT((block_decompose_apply(sym, ch, rho) - ref).norm(), 1e-10);
  EXPECT_LT((block_decompose(sym, ch).apply(rho) - ref).norm(), 1e-10);
}

TEST(symmetry, check_symmetric_on_block_unitaries) {
  Rng rng(11);
  const SymmetricOperator sym = particle_number_symmetry(2);
  const Matrix u = oracle::random_block_unitary(sym.projectors(), rng);
  EXPECT_TRUE(check_symmetric(u, sym));
  EXPECT_FALSE(check_symmetric(PauliString::from_string("XI").to_matrix(), sym));
}

TEST(symmetry, pauli_symmetry_projectors) {
  const SymmetricOperator sym = pauli_symmetry(PauliString::from_string("ZZ"));
  ASSERT_EQ(sym.num_spaces(), 2);
  const Matrix zz = oracle::pauli("ZZ");
  EXPECT_LT((sym.projectors()[1] - (Matrix::Identity(4, 4) + zz) / 2.0).norm(), 1e-12);
}

TEST(symmetry, verification_post_selects_reference_sector) {
  const SymmetricOperator sym = pauli_symmetry(PauliString::from_string("ZZ"));
  const Matrix ref = projector(basis_state(2, 0));
  Matrix noisy = 0.9 * ref + 0.1 * projector(basis_state(2, 1));
  const SvResult sv = symmetry_verification(sym, noisy, ref);
  EXPECT_NEAR(sv.probability, 0.9, 1e-12);
  EXPECT_LT((sv.state - ref).norm(), 1e-12);
}

TEST(symmetry, verification_rejects_mixed_reference) {
  const SymmetricOperator sym = pauli_symmetry(PauliString::from_string("Z"));
  const Matrix ref = projector((basis_state(1, 0) + basis_state(1, 1)) / std::sqrt(2.0));
  EXPECT_THROW(symmetry_verification(sym, ref, ref), std::exception);
}
