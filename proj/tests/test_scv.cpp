#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "scv/experiments.hpp"

using namespace scv;

namespace {

std::vector<Matrix> group_matrices(const GeneratingSet& gens) {
  std::vector<Matrix> out;
  for (const auto& g : generated_group(gens)) out.push_back(oracle::pauli(g.letters()));
  return out;
}

KrausChannel with_unitary(const std::vector<Matrix>& noise, const Matrix& u) {
  std::vector<Matrix> ks;
  for (const auto& k : noise) ks.push_back(k * u);
  const int n = qubits_of(u.rows());
  return KrausChannel(n, n, ks);
}

SymmetricOperator sum_z(int n) {
  Matrix s = Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int q = 0; q < n; ++q) s += PauliString::single(n, q, 'Z').to_matrix();
  return eigenspace_projectors(s);
}

void apply_layer(Matrix& x, const Matrix& u, int n, const std::array<double, 4>& law) {
  x = u * x * u.adjoint();
  for (int q = 0; q < n; ++q) apply_pauli_qubit(x, n, q, law);
}

}  // namespace

TEST(scv, detect_matches_projector_oracle) {
  Rng rng(21);
  const SymmetricOperator sym = sum_z(2);
  const auto ks = oracle::random_channel(2, 3, rng);
  const Matrix rho = random_density(2, rng);
  const Matrix got = scv_detect(sym, KrausChannel(2, 2, ks)).purified.inner().apply(rho);
  EXPECT_LT((got - oracle::projector_detect(sym.projectors(), ks, rho)).norm(), 1e-10);
}

TEST(scv, pauli_detect_matches_group_average) {
  Rng rng(22);
  const GeneratingSet gens(3, {PauliString::from_string("ZZI"), PauliString::from_string("IXX")});
  const auto ks = oracle::random_channel(3, 2, rng);
  const Matrix rho = random_density(3, rng);
  const Matrix got = scv_detect_pauli(gens, KrausChannel(3, 3, ks)).purified.inner().apply(rho);
  EXPECT_LT((got - oracle::group_detect(group_matrices(gens), ks, rho)).norm(), 1e-10);
}

TEST(scv, circuit_equals_supermap_without_gadget_noise) {
  Rng rng(23);
  const auto ks = oracle::random_channel(2, 2, rng);
  const KrausChannel ch(2, 2, ks);
  const GadgetNoiseConfig clean;
  const SymmetricOperator sym = sum_z(2);
  EXPECT_LT(choi_distance(scv_detect_circuit(sym, ch, clean).purified.inner(), scv_detect(sym, ch).purified.inner()),
            1e-9);
  const GeneratingSet gens(2, {PauliString::from_string("XX"), PauliString::from_string("ZZ")});
  EXPECT_LT(
      choi_distance(scv_detect_circuit(gens, ch, clean).purified.inner(), scv_detect_pauli(gens, ch).purified.inner()),
      1e-9);
}

TEST(scv, pauli_gadget_equals_symmetric_gadget_for_single_generator) {
  Rng rng(24);
  const auto ks = oracle::random_channel(2, 2, rng);
  const KrausChannel ch(2, 2, ks);
  const PauliString zz = PauliString::from_string("ZZ");
  EXPECT_LT(choi_distance(scv_detect_pauli(GeneratingSet(2, {zz}), ch).purified.inner(),
                          scv_detect(pauli_symmetry(zz), ch).purified.inner()),
            1e-10);
}

TEST(scv, theorem1_condition_matches_proportionality) {
  Rng rng(25);
  int agree = 0, positives = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto projs = oracle::random_projectors(2, {2, 1, 1}, rng);
    Matrix s = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < projs.size(); ++i) s += static_cast<double>(i) * projs[i];
    const SymmetricOperator sym = eigenspace_projectors(s);
    const Matrix u = oracle::random_block_unitary(projs, rng);
    std::vector<Matrix> noise;
    const bool structured = trial % 2 == 0;
    for (int k = 0; k < 2; ++k) {
      Matrix off = Matrix::Zero(4, 4);
      const Matrix r = oracle::random_hermitian(4, rng);
      for (std::size_t i = 0; i < projs.size(); ++i)
        for (std::size_t j = 0; j < projs.size(); ++j)
          if (i != j || !structured) off += projs[i] * r * projs[j];
      noise.push_back(0.4 * Matrix::Identity(4, 4) + 0.1 * off);
    }
    const KrausChannel nch(2, 2, noise);
    const KrausChannel noisy = with_unitary(noise, u);
    const bool cond = theorem1_condition(nch, sym);
    const auto lam = proportionality(scv_detect(sym, noisy).purified.inner(), KrausChannel::unitary(u));
    agree += cond == lam.has_value();
    positives += cond;
    if (lam) {
      const Matrix rho = random_density(2, rng);
      EXPECT_NEAR(*lam, oracle::projector_detect(projs, noisy.kraus_ops(), rho).trace().real(), 1e-9);
    }
  }
  EXPECT_EQ(agree, 30);
  EXPECT_EQ(positives, 15);
}

TEST(scv, corollary1_heisenberg_single_qubit_errors) {
  const HamiltonianSpec h = build_heisenberg(4);
  const GeneratingSet gens = commutant(h.term_set());
  for (int q = 0; q < 4; ++q)
    for (char c : {'X', 'Y', 'Z'}) EXPECT_TRUE(detectable(PauliString::single(4, q, c), gens));
  for (const char* s : {"XXII", "IYYI", "IIZZ"}) EXPECT_FALSE(detectable(PauliString::from_string(s), gens)) << s;
}

TEST(scv, layered_detection_rate) {
  EXPECT_NEAR(layerwise_detect_overhead(4, 50, 0.01, 1), std::pow(0.99, -50), 1e-9);
}

TEST(scv, flags_suppress_first_order_idle_errors) {
  const GeneratingSet gens(2, {PauliString::from_string("ZZ")});
  const Matrix u = expi_hermitian(PauliString::from_string("ZZ").to_matrix(), 0.4);
  const KrausChannel ideal = KrausChannel::unitary(u);
  auto deviation = [&](double eps, bool flags) {
    GadgetNoiseConfig cfg;
    cfg.ancilla_idle_rate = eps;
    cfg.flags_enabled = flags;
    const KrausChannel out = scv_detect_circuit(gens, ideal, cfg).purified.inner();
    const double tr = choi(out).trace().real() / 4.0;
    return choi_distance(out.scaled(1.0 / std::sqrt(tr)), ideal);
  };
  const double ratio_flag = deviation(1e-3, true) / deviation(1e-4, true);
  const double ratio_plain = deviation(1e-3, false) / deviation(1e-4, false);
  EXPECT_NEAR(ratio_plain, 10.0, 0.5);
  EXPECT_GT(ratio_flag, 80.0);
}

TEST(scv, flags_require_pauli_gadget) {
  GadgetNoiseConfig cfg;
  cfg.flags_enabled = true;
  EXPECT_THROW(scv_detect_circuit(sum_z(2), KrausChannel::identity(2), cfg), std::invalid_argument);
  GadgetNoiseConfig bad;
  bad.gadget_error_rate = -0.1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(scv, frame_gadget_matches_register_simulation) {
  Rng rng(26);
  const HamiltonianSpec h = build_heisenberg(4);
  const GeneratingSet gens = commutant(h.term_set());
  const Matrix u = expi_hermitian(h.matrix(), 0.3);
  const std::array<double, 4> law{0.97, 0.01, 0.012, 0.008};
  GadgetNoiseConfig cfg;
  cfg.gadget_error_rate = 0.004;
  cfg.ancilla_idle_rate = 0.02;
  const PauliFrameGadget fast(gens, u, law, cfg);
  const Matrix rho = random_density(4, rng);
  GadgetRun run = run_gadget(gens, rho, [&](Matrix& x) { apply_layer(x, u, 4, law); }, cfg, true);
  for (std::uint64_t s = 0; s < 4; ++s)
    EXPECT_LT((fast.apply_branch(rho, s) - run.state.block(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s))).norm(),
              1e-12)
        << s;

  FeedbackPolicy policy = FeedbackPolicy::trivial(4, 4);
  policy.corrections[1] = PauliString::from_string("XIII");
  policy.corrections[3] = PauliString::from_string("IZII");
  Matrix ref = Matrix::Zero(16, 16);
  for (std::uint64_t s = 0; s < 4; ++s)
    ref += conjugate(policy.at(s), run.state.block(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)));
  EXPECT_LT((fast.apply_corrected(rho, policy) - ref).norm(), 1e-12);
  EXPECT_NEAR(fast.apply_corrected(rho, policy).trace().real(), 1.0, 1e-12);
}

TEST(scv, frame_gadget_rejects_non_commuting_unitary) {
  const GeneratingSet gens(2, {PauliString::from_string("ZZ")});
  const Matrix u = expi_hermitian(PauliString::from_string("XI").to_matrix(), 0.3);
  EXPECT_THROW(PauliFrameGadget(gens, u, {1, 0, 0, 0}, GadgetNoiseConfig{}), std::invalid_argument);
}

TEST(scv, feedback_corrects_rz_with_bit_flips) {
  const double theta = 0.7, p = 0.2;
  const Matrix u = expi_hermitian(PauliString::from_string("Z").to_matrix(), -theta / 2);
  const KrausChannel noisy = with_unitary({std::sqrt(1 - p) * oracle::pauli("I"), std::sqrt(p) * oracle::pauli("X")}, u);
  const GeneratingSet gens(1, {PauliString::from_string("Z")});
  const auto policy = find_feedback(gens, noisy, u);
  ASSERT_TRUE(policy.has_value());
  EXPECT_EQ(policy->at(1).letters(), "X");
  EXPECT_LT(choi_distance(scv_correct(gens, noisy, *policy), KrausChannel::unitary(u)), 1e-10);
  EXPECT_TRUE(theorem3prime_condition(KrausChannel(1, 1, {std::sqrt(1 - p) * oracle::pauli("I"),
                                                          std::sqrt(p) * oracle::pauli("X")}),
                                      pauli_symmetry(PauliString::from_string("Z"))));
}

TEST(scv, feedback_for_code_hamiltonian) {
  Rng rng(27);
  const HamiltonianSpec h = build_code_hamiltonian("5_1_3");
  const GeneratingSet gens = commutant(h.term_set());
  const Matrix u = expi_hermitian(h.matrix(), 0.9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> w(16);
  double total = 0.0;
  for (auto& x : w) total += x = uni(rng);
  std::vector<Matrix> noise{std::sqrt(w[0] / total) * Matrix::Identity(32, 32)};
  std::size_t idx = 1;
  for (int q = 0; q < 5; ++q)
    for (char c : {'X', 'Y', 'Z'}) noise.push_back(std::sqrt(w[idx++] / total) * PauliString::single(5, q, c).to_matrix());
  const auto policy = find_feedback(gens, with_unitary(noise, u), u);
  EXPECT_TRUE(policy.has_value());
}

TEST(scv, heisenberg_adjacent_flips_not_correctable) {
  const HamiltonianSpec h = build_heisenberg(4);
  const GeneratingSet gens = commutant(h.term_set());
  const Matrix u = expi_hermitian(h.matrix(), 0.5);
  const std::vector<Matrix> noise{std::sqrt(0.8) * Matrix::Identity(16, 16), std::sqrt(0.1) * oracle::pauli("XIII"),
                                  std::sqrt(0.1) * oracle::pauli("IXII")};
  EXPECT_FALSE(find_feedback(gens, with_unitary(noise, u), u).has_value());
  PauliSet ps(4);
  ps.insert(PauliString::from_string("XIII"));
  ps.insert(PauliString::from_string("IXII"));
  EXPECT_FALSE(correctable_set(ps, generated_group(4, h.term_set().members())));
}

TEST(scv, correction_products_include_pairs) {
  PauliSet ps(2);
  ps.insert(PauliString::from_string("XI"));
  ps.insert(PauliString::from_string("IZ"));
  const PauliSet prods = correction_products(ps);
  EXPECT_EQ(prods.size(), 3u);
  EXPECT_TRUE(prods.contains(PauliString::from_string("XZ")));
}

TEST(scv, concatenated_single_pauli_supermaps) {
  Rng rng(28);
  const auto ks = oracle::random_channel(2, 2, rng);
  const KrausChannel ch(2, 2, ks);
  const auto a = PauliString::from_string("ZI"), b = PauliString::from_string("IX");
  const KrausChannel twice = concatenate(detection_supermap(a), detection_supermap(b))(ch);
  EXPECT_LT(choi_distance(twice, scv_detect_pauli(GeneratingSet(2, {a, b}), ch).purified.inner()), 1e-12);
}
