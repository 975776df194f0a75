#include "sailperf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sailperf/angles.hpp"

namespace sailperf::metrics {

double rmse(const sim::RunLog& log) {
  if (log.records.empty()) throw std::invalid_argument("rmse: empty run log");
  double sum_sq = 0.0;
  for (const auto& rec : log.records) {
    const double e = sim::bearing_error(rec.desired_bearing, rec.actual_bearing);
    sum_sq += e * e;
  }
  return std::sqrt(sum_sq / static_cast<double>(log.records.size()));
}

double absolute_performance(const sim::RunLog& log) { return rmse(log); }

double uncertainty_measure(const sim::RunLog& log) {
  if (log.records.empty()) {
    throw std::invalid_argument("uncertainty_measure: empty run log");
  }
  wind::WindLog samples;
  samples.reserve(log.records.size());
  for (const auto& rec : log.records) samples.push_back(rec.wind);
  const auto stats = wind::wind_stats(samples);
  return stats.sd_dir * stats.sd_speed;
}

double wind_speed_value(double mean_speed) {
  if (mean_speed == 0.0) return 0.0;
  if (mean_speed > 14.0) return 1.0;
  return 0.5;
}

double wind_direction_value(double mean_dir, double course_bearing) {
  const double delta = wrap_signed(mean_dir - course_bearing);
  return 0.5 * (1.0 + std::cos(deg2rad(delta)));
}

double base_difficulty(double mean_dir, double mean_speed, double course_bearing,
                       double floor) {
  const double raw =
      wind_direction_value(mean_dir, course_bearing) * wind_speed_value(mean_speed);
  return std::max(floor, raw);
}

double relative_performance(double abs_perf, double uncertainty_measure,
                            double base_difficulty) {
  const double denom = uncertainty_measure * base_difficulty;
  if (denom <= 0.0) {
    throw std::domain_error("relative_performance: denominator is zero");
  }
  return abs_perf / denom;
}

std::vector<double> normalize_series(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("normalize_series: empty series");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(span > 0.0 ? (v - lo) / span : 0.0);
  return out;
}

MetricsRecord compute_metrics(const sim::RunLog& log, double course_bearing) {
  MetricsRecord r;
  r.rmse = rmse(log);
  r.abs_perf = r.rmse;

  wind::WindLog samples;
  samples.reserve(log.records.size());
  for (const auto& rec : log.records) samples.push_back(rec.wind);
  const auto stats = wind::wind_stats(samples);
  r.mean_dir = stats.mean_dir;
  r.sd_dir = stats.sd_dir;
  r.mean_speed = stats.mean_speed;
  r.sd_speed = stats.sd_speed;

  r.uncertainty_measure = stats.sd_dir * stats.sd_speed;
  r.base_difficulty = base_difficulty(stats.mean_dir, stats.mean_speed, course_bearing);
  r.rel_perf = relative_performance(r.abs_perf, r.uncertainty_measure, r.base_difficulty);
  return r;
}

}  // namespace sailperf::metrics
