#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sailperf/rng.hpp"

namespace sailperf::wind {

/// Limits and variability scores for one wind configuration (labels A..I):
/// the nine combinations of {none, low, high} direction variability with
/// {none, low, high} speed variability.
struct WindConfig {
  char label{};
  double dir_lower{};    // degrees, wind-from, 0 = due north
  double dir_upper{};
  double speed_lower{};  // m/s
  double speed_upper{};
  int dir_score{};       // 0 none, 1 low, 2 high
  int speed_score{};
};

inline constexpr std::array<char, 9> kConfigLabels{'A', 'B', 'C', 'D', 'E',
                                                   'F', 'G', 'H', 'I'};

/// Throws std::invalid_argument naming the valid labels on anything
/// outside A..I.
WindConfig config_from_label(char label);

struct WindSample {
  double t{};
  double direction{};  // degrees, wind-from, wrapped to [0, 360)
  double speed{};      // m/s, >= 0
};

using WindLog = std::vector<WindSample>;

/// Stochastic process tuning. Targets are redrawn every period_s seconds
/// from a Gaussian at the limit midpoint with sigma = range / 4, clamped to
/// the limits. Each step the held target is perturbed by Gaussian jitter;
/// jitter draws are clamped to +/- jitter_clamp_sigmas standard deviations
/// so samples stay inside a hard envelope around the limits. The jitter
/// floor keeps the logged standard deviations positive even for zero-width
/// limits.
struct WindParams {
  double period_s{4.0};
  double jitter_dir_deg{1.0};
  double jitter_speed_ms{0.25};
  double jitter_clamp_sigmas{3.0};
};

/// One clamped-Gaussian draw of (direction, speed) targets. Degenerate
/// limits (lower == upper) return the midpoint exactly without consuming
/// randomness.
std::pair<double, double> sample_target(Rng& rng, const WindConfig& cfg);

/// Seeded bounded wind generator. next() yields one sample per simulation
/// step; a fresh target is drawn at t = 0 and every period_s thereafter.
class WindProcess {
 public:
  /// dt must divide the redraw period; throws std::invalid_argument otherwise.
  WindProcess(const WindConfig& cfg, const WindParams& params, double dt,
              std::uint64_t seed);

  WindSample next();

  double target_direction() const { return target_dir_; }
  double target_speed() const { return target_speed_; }

 private:
  WindConfig cfg_;
  WindParams params_;
  double dt_;
  long steps_per_period_;
  long step_ = 0;
  double target_dir_ = 0.0;
  double target_speed_ = 0.0;
  Rng rng_;
};

/// Convenience: run a WindProcess for a fixed duration.
WindLog generate_log(const WindConfig& cfg, const WindParams& params,
                     double duration_s, double dt, std::uint64_t seed);

struct WindStats {
  double mean_dir{};
  double sd_dir{};
  double mean_speed{};
  double sd_speed{};
};

/// Arithmetic mean and population standard deviation per channel. All
/// configurations stay within +/-40 degrees of 180, so no circular
/// statistics are used. Throws std::invalid_argument on an empty log.
WindStats wind_stats(std::span<const WindSample> log);

}  // namespace sailperf::wind
