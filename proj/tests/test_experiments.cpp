#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "scv/experiments.hpp"

using namespace scv;

namespace {

const std::string kData = SCV_DATA_DIR;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scv");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

double value_at(const SweepResult& r, double x, const std::string& mode, const std::string& metric) {
  for (const auto& [sx, v] : r.series(mode, metric))
    if (sx == x) return v;
  throw std::out_of_range("missing row");
}

}  // namespace

TEST(experiments, config_parses_lists_and_expressions) {
  const ExperimentConfig c = ExperimentConfig::parse(
      "# comment\nexperiment = heisenberg\nn = 4\ntheta = 2pi/100\nlayers = 10\np_err = 1e-4, 1e-3\n"
      "modes = raw, SV\nflags = on\nboundary = periodic\n");
  EXPECT_EQ(c.experiment, "heisenberg");
  EXPECT_NEAR(c.theta, 2 * std::numbers::pi / 100, 1e-15);
  EXPECT_EQ(c.p_err.size(), 2u);
  EXPECT_EQ(c.modes, (std::vector<std::string>{"raw", "SV"}));
  EXPECT_TRUE(c.flags);
  EXPECT_FALSE(c.open_boundary);
}

TEST(experiments, config_errors) {
  EXPECT_THROW(ExperimentConfig::parse("experiment = heisenberg\nbogus = 1\n"), config_error);
  EXPECT_THROW(ExperimentConfig::parse("experiment = nowhere\n"), config_error);
  EXPECT_THROW(ExperimentConfig::parse("experiment = heisenberg\nn = four\n"), config_error);
  EXPECT_THROW(ExperimentConfig::parse("experiment = heisenberg\nmodes = magic\n"), config_error);
  EXPECT_THROW(ExperimentConfig::parse("experiment = heisenberg\np_err = 2\n"), config_error);
  EXPECT_THROW(ExperimentConfig::parse("experiment = heisenberg\nflags = maybe\n"), config_error);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/file.cfg"), config_error);
}

TEST(experiments, heisenberg_curve_ordering) {
  const ExperimentConfig c = ExperimentConfig::parse(
      "experiment = heisenberg\nn = 4\ntheta = 2pi\nlayers = 20\np_err = 1e-4, 1e-3\n"
      "modes = raw, SV, SCV_whole, SCV_layerwise\nnoiseless_gadget = true\n");
  const SweepResult r = run_experiment(c);
  for (double p : {1e-4, 1e-3}) {
    const double raw = value_at(r, p, "raw", "trace_distance");
    EXPECT_LE(value_at(r, p, "SV", "trace_distance"), raw);
    EXPECT_LT(value_at(r, p, "SCV_whole", "trace_distance"), raw);
    EXPECT_LT(value_at(r, p, "SCV_layerwise", "trace_distance"), raw);
    EXPECT_GE(value_at(r, p, "SCV_whole", "overhead"), 1.0);
  }
}

TEST(experiments, noisy_gadget_with_flags_runs) {
  const ExperimentConfig c = ExperimentConfig::parse(
      "experiment = heisenberg\nn = 4\ntheta = 1\nlayers = 3\np_err = 1e-3\n"
      "modes = SCV_whole, SCV_layerwise\nflags = true\nancilla_idle = true\n");
  const SweepResult r = run_experiment(c);
  EXPECT_EQ(r.series("SCV_layerwise", "trace_distance").size(), 1u);
}

TEST(experiments, floquet_runs_and_orders) {
  const ExperimentConfig c = ExperimentConfig::parse(
      "experiment = floquet\nn = 3\ntheta = 2pi/100\nlayers = 20\np_err = 1e-3\nmodes = raw, SV, SCV_whole, "
      "SCV_layerwise\nnoiseless_gadget = true\n");
  const SweepResult r = run_experiment(c);
  const double raw = value_at(r, 1e-3, "raw", "trace_distance");
  EXPECT_LE(value_at(r, 1e-3, "SV", "trace_distance"), raw);
  EXPECT_LT(value_at(r, 1e-3, "SCV_layerwise", "trace_distance"), raw);
}

TEST(experiments, u1_number_gadget_overtakes_parity) {
  ExperimentConfig c = ExperimentConfig::parse(
      "experiment = u1\np_err = 1e-3\ntheta_grid = 0.1, 1, 10, 20\nmodes = raw, SCV_parity, SCV_U1_noisy\n");
  c.hamiltonian = kData + "/h2_sto3g_1.1A.ham";
  const SweepResult r = run_experiment(c);
  const auto parity = r.series("SCV_parity", "trace_distance");
  const auto number = r.series("SCV_U1_noisy", "trace_distance");
  ASSERT_EQ(parity.size(), number.size());
  EXPECT_GT(number.front().second, parity.front().second);
  EXPECT_LT(number.back().second, parity.back().second);
}

TEST(experiments, code_correction_is_second_order) {
  const ExperimentConfig c = ExperimentConfig::parse(
      "experiment = code\ntheta = 1\nlayers = 20\np_err = 1e-4, 1e-3\nmodes = raw, detect, correct\n"
      "noiseless_gadget = true\n");
  const SweepResult r = run_experiment(c);
  const auto corr = r.series("correct", "trace_distance");
  EXPECT_NEAR(loglog_slope(corr), 2.0, 0.1);
  EXPECT_LT(value_at(r, 1e-3, "detect", "trace_distance"), 1e-8);
  EXPECT_EQ(value_at(r, 1e-3, "correct", "overhead"), 1.0);
}

TEST(experiments, idle_and_select_sweeps) {
  const SweepResult idle = run_experiment(ExperimentConfig::parse("experiment = idle\nl_grid = 0, 10, 100\n"));
  EXPECT_EQ(value_at(idle, 0, "raw", "trace_distance"), 0.0);
  EXPECT_NEAR(value_at(idle, 10, "VSCV", "trace_distance"), value_at(idle, 100, "VSCV", "trace_distance"), 1e-12);
  const SweepResult sel = run_experiment(ExperimentConfig::parse("experiment = select\nm_grid = 2, 4, 8\n"));
  EXPECT_EQ(value_at(sel, 4, "raw", "n"), 32.0);
}

TEST(experiments, csv_is_deterministic) {
  const ExperimentConfig c = ExperimentConfig::parse("experiment = select\nm_grid = 2, 3\n");
  const std::string a = run_experiment(c).to_csv(), b = run_experiment(c).to_csv();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# experiment=select\n", 0), 0u);
  EXPECT_NE(a.find("\nsweep_var,mode,metric,value\n"), std::string::npos);
  EXPECT_NE(run_experiment(c).to_json().find("timestamp"), std::string::npos);
}

TEST(experiments, loglog_slope_of_power_law) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 4.0, 8.0}) pts.emplace_back(x, 3.0 * x * x);
  EXPECT_NEAR(loglog_slope(pts), 2.0, 1e-12);
  EXPECT_THROW(loglog_slope({{1.0, 1.0}}), std::invalid_argument);
}

TEST(experiments, layerwise_overhead_follows_geometric_law) {
  for (int l : {10, 100}) EXPECT_NEAR(layerwise_detect_overhead(4, l, 0.01, 3), std::pow(0.99, -l), 1e-6 * l);
}

TEST(experiments, cli_exit_codes) {
  EXPECT_EQ(run_cli({"resource-bounds", "--theta", "0.785398163397448", "--p0", "0.9", "--px", "0.08", "--py", "0.01",
                     "--pz", "0.01"}),
            0);
  EXPECT_EQ(run_cli({"analyze-symmetry", kData + "/heisenberg4.ham"}), 0);
  EXPECT_EQ(run_cli({"analyze-symmetry", kData + "/../tests/data/malformed.ham"}), 2);
  EXPECT_EQ(run_cli({"verify-conditions", kData + "/heisenberg4.ham", "--noise", "XIII:0.01,IZII:0.02"}), 0);
  EXPECT_EQ(run_cli({"verify-conditions", kData + "/heisenberg4.ham", "--noise", "XII:0.01"}), 2);
  EXPECT_EQ(run_cli({"resource-bounds", "--theta", "2"}), 2);
  EXPECT_EQ(run_cli({"no-such-command"}), 2);
}

TEST(experiments, cli_writes_csv_file) {
  const std::string cfg = testing::TempDir() + "select.cfg", out = testing::TempDir() + "select.csv";
  std::ofstream(cfg) << "experiment = select\nm_grid = 2, 3\n";
  ASSERT_EQ(run_cli({"run-experiment", cfg, "--out", out}), 0);
  std::ifstream f(out);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first, "# experiment=select");
}
