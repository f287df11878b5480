#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "scv/experiments.hpp"

#ifndef SCV_GIT_DESCRIBE
#define SCV_GIT_DESCRIBE "unknown"
#endif

namespace scv {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

}  // namespace

void SweepResult::add(double x, const std::string& mode, const std::string& metric, double value) {
  rows.push_back({x, mode, metric, value});
}

std::vector<std::pair<double, double>> SweepResult::series(const std::string& mode, const std::string& metric) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows)
    if (r.mode == mode && r.metric == metric) out.emplace_back(r.sweep_value, r.value);
  return out;
}

std::string SweepResult::to_csv() const {
  // No wall-clock data here so that identical configurations give byte-identical files.
  std::ostringstream out;
  out << "# experiment=" << experiment << "\n";
  out << "# sweep_var=" << sweep_var << "\n";
  out << "# code_version=" << SCV_GIT_DESCRIBE << "\n";
  for (const auto& [k, v] : metadata)
    if (k != "experiment") out << "# " << k << "=" << v << "\n";
  out << "sweep_var,mode,metric,value\n";
  for (const auto& r : rows) out << fmt(r.sweep_value) << "," << r.mode << "," << r.metric << "," << fmt(r.value) << "\n";
  return out.str();
}

std::string SweepResult::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["sweep_var"] = sweep_var;
  j["metadata"] = metadata;
  j["metadata"]["code_version"] = SCV_GIT_DESCRIBE;
  j["metadata"]["timestamp"] = utc_timestamp();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"sweep_var", r.sweep_value}, {"mode", r.mode}, {"metric", r.metric}, {"value", r.value}});
  return j.dump(2);
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(points.size());
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("loglog_slope: x values must differ");
  return (k * sxy - sx * sy) / den;
}

}  // namespace scv
