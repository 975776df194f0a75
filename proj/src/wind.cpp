#include "sailperf/wind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sailperf/angles.hpp"

namespace sailperf::wind {

namespace {

struct Level {
  double lower;
  double upper;
  int score;
};

constexpr Level kDirectionLevels[3] = {{180.0, 180.0, 0},   // none
                                       {160.0, 200.0, 1},   // low
                                       {140.0, 220.0, 2}};  // high
constexpr Level kSpeedLevels[3] = {{7.0, 7.0, 0},   // none
                                   {4.0, 10.0, 1},  // low
                                   {1.0, 13.0, 2}}; // high

double clamped_jitter(Rng& rng, double sigma, double clamp_sigmas) {
  const double z = std::clamp(rng.gaussian(), -clamp_sigmas, clamp_sigmas);
  return sigma * z;
}

}  // namespace

WindConfig config_from_label(char label) {
  if (label < 'A' || label > 'I') {
    throw std::invalid_argument(std::string("unknown wind configuration '") +
                                label + "': valid labels are A..I");
  }
  // Labels run column-major through the (direction level, speed level)
  // grid: A,B,C share speed "none", D,E,F speed "low", G,H,I speed "high",
  // with direction cycling none/low/high inside each block.
  const int idx = label - 'A';
  const Level& dir = kDirectionLevels[idx % 3];
  const Level& speed = kSpeedLevels[idx / 3];
  return WindConfig{label,       dir.lower, dir.upper,  speed.lower,
                    speed.upper, dir.score, speed.score};
}

std::pair<double, double> sample_target(Rng& rng, const WindConfig& cfg) {
  const auto draw = [&rng](double lo, double hi) {
    if (lo == hi) return lo;
    const double mid = 0.5 * (lo + hi);
    const double sigma = (hi - lo) / 4.0;
    return std::clamp(rng.gaussian(mid, sigma), lo, hi);
  };
  return {draw(cfg.dir_lower, cfg.dir_upper),
          draw(cfg.speed_lower, cfg.speed_upper)};
}

WindProcess::WindProcess(const WindConfig& cfg, const WindParams& params,
                         double dt, std::uint64_t seed)
    : cfg_(cfg), params_(params), dt_(dt), rng_(seed) {
  if (dt <= 0.0) throw std::invalid_argument("wind process dt must be positive");
  steps_per_period_ = std::lround(params.period_s / dt);
  if (steps_per_period_ < 1 ||
      std::abs(static_cast<double>(steps_per_period_) * dt - params.period_s) > 1e-9) {
    throw std::invalid_argument("dt must divide the wind redraw period");
  }
}

WindSample WindProcess::next() {
  if (step_ % steps_per_period_ == 0) {
    std::tie(target_dir_, target_speed_) = sample_target(rng_, cfg_);
  }
  const double t = static_cast<double>(step_) * dt_;
  const double dir =
      target_dir_ + clamped_jitter(rng_, params_.jitter_dir_deg, params_.jitter_clamp_sigmas);
  const double speed =
      target_speed_ + clamped_jitter(rng_, params_.jitter_speed_ms, params_.jitter_clamp_sigmas);
  ++step_;
  return {t, wrap_360(dir), std::max(0.0, speed)};
}

WindLog generate_log(const WindConfig& cfg, const WindParams& params,
                     double duration_s, double dt, std::uint64_t seed) {
  WindProcess proc(cfg, params, dt, seed);
  const long steps = std::lround(duration_s / dt);
  if (steps < 1) throw std::invalid_argument("wind log duration too short");
  WindLog log;
  log.reserve(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) log.push_back(proc.next());
  return log;
}

WindStats wind_stats(std::span<const WindSample> log) {
  if (log.empty()) throw std::invalid_argument("wind_stats: empty log");
  const double n = static_cast<double>(log.size());
  WindStats s;
  for (const auto& w : log) {
    s.mean_dir += w.direction;
    s.mean_speed += w.speed;
  }
  s.mean_dir /= n;
  s.mean_speed /= n;
  double var_dir = 0.0;
  double var_speed = 0.0;
  for (const auto& w : log) {
    var_dir += (w.direction - s.mean_dir) * (w.direction - s.mean_dir);
    var_speed += (w.speed - s.mean_speed) * (w.speed - s.mean_speed);
  }
  s.sd_dir = std::sqrt(var_dir / n);
  s.sd_speed = std::sqrt(var_speed / n);
  return s;
}

}  // namespace sailperf::wind
