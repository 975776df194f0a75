#pragma once

#include <span>
#include <vector>

#include "sailperf/boat.hpp"

namespace sailperf::metrics {

/// Everything the performance pipeline derives from one run: bearing-error
/// RMSE (identically the Absolute Performance), the Uncertainty Measure
/// (product of the wind standard deviations), the Base Difficulty of the
/// mean environment, and the Relative Performance quotient. Lower is better
/// for both performance values.
struct MetricsRecord {
  double rmse{};
  double abs_perf{};
  double uncertainty_measure{};  // degrees * m/s
  double base_difficulty{};      // in [floor, 1]
  double rel_perf{};
  double mean_dir{};
  double sd_dir{};
  double mean_speed{};
  double sd_speed{};
};

/// Base-difficulty floor: keeps the Relative Performance denominator
/// positive when the raw direction/speed product is zero.
inline constexpr double kBaseDifficultyFloor = 0.01;

/// Root mean square of the wrapped bearing error over the run.
double rmse(const sim::RunLog& log);

/// Equals rmse: with a single input the combining function is the identity.
double absolute_performance(const sim::RunLog& log);

/// sd(wind direction) * sd(wind speed) over the run's wind log.
double uncertainty_measure(const sim::RunLog& log);

/// Speed filter: 0 for dead calm, 1 above 14 m/s, 0.5 otherwise.
double wind_speed_value(double mean_speed);

/// (1 + cos(mean_dir - course_bearing)) / 2: headwind 1, beam 0.5,
/// tailwind 0.
double wind_direction_value(double mean_dir, double course_bearing);

/// Product of the direction and speed values, floored at
/// kBaseDifficultyFloor.
double base_difficulty(double mean_dir, double mean_speed, double course_bearing,
                       double floor = kBaseDifficultyFloor);

/// abs_perf / (uncertainty_measure * base_difficulty). Throws
/// std::domain_error on a zero denominator (unreachable unless the jitter
/// and difficulty floors are disabled by configuration).
double relative_performance(double abs_perf, double uncertainty_measure,
                            double base_difficulty);

/// Min-max scaling to [0, 1]; an all-equal series maps to all zeros.
/// Throws std::invalid_argument on an empty series.
std::vector<double> normalize_series(std::span<const double> values);

/// Full pipeline for one run.
MetricsRecord compute_metrics(const sim::RunLog& log, double course_bearing);

}  // namespace sailperf::metrics
