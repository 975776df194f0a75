#include "sailperf/boat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sailperf/angles.hpp"

namespace sailperf::sim {

Course course_from_offset(int offset_m, bool single_leg) {
  if (offset_m != 25 && offset_m != 50 && offset_m != 100) {
    throw std::invalid_argument("course offset must be 25, 50 or 100 metres");
  }
  Course c;
  c.start = {0.0, 0.0};
  c.vertical_offset = offset_m;
  c.waypoints.push_back({250.0, static_cast<double>(offset_m)});
  if (!single_leg) c.waypoints.push_back({500.0, 0.0});
  return c;
}

double course_bearing(const Course& course) {
  const Point& end = course.waypoints.back();
  return bearing_of(end.x - course.start.x, end.y - course.start.y);
}

double turn_angle_deg(const Course& course) {
  const Point& first = course.waypoints.front();
  return rad2deg(std::atan2(first.y - course.start.y, first.x - course.start.x));
}

std::vector<PolarPoint> default_polar() {
  return {{0.0, 0.0}, {30.0, 0.0}, {90.0, 0.5}, {180.0, 0.4}};
}

double desired_bearing(const BoatState& state, const Point& wp) {
  const double de = wp.x - state.x;
  const double dn = wp.y - state.y;
  if (de == 0.0 && dn == 0.0) {
    throw std::invalid_argument("desired_bearing: boat is exactly on the waypoint");
  }
  return bearing_of(de, dn);
}

double bearing_error(double desired, double actual) {
  return wrap_signed(desired - actual);
}

double polar_speed(double apparent_angle_deg, double wind_speed,
                   std::span<const PolarPoint> polar) {
  if (polar.empty()) return 0.0;
  const double a = apparent_angle_deg;
  if (a <= polar.front().angle_deg) return polar.front().fraction * wind_speed;
  if (a >= polar.back().angle_deg) return polar.back().fraction * wind_speed;
  for (std::size_t i = 1; i < polar.size(); ++i) {
    if (a <= polar[i].angle_deg) {
      const double span = polar[i].angle_deg - polar[i - 1].angle_deg;
      const double w = span > 0.0 ? (a - polar[i - 1].angle_deg) / span : 1.0;
      const double frac = polar[i - 1].fraction + w * (polar[i].fraction - polar[i - 1].fraction);
      return frac * wind_speed;
    }
  }
  return polar.back().fraction * wind_speed;
}

BoatState step(const BoatState& state, double rudder,
               const wind::WindSample& wind, const SimParams& params) {
  BoatState next = state;
  next.heading = wrap_360(state.heading + params.turn_gain * rudder * params.dt);
  const double apparent = std::abs(wrap_signed(wind.direction - next.heading));
  next.speed = polar_speed(apparent, wind.speed, params.polar);
  const double dist = next.speed * params.dt;
  next.x = state.x + dist * std::sin(deg2rad(next.heading));
  next.y = state.y + dist * std::cos(deg2rad(next.heading));
  return next;
}

namespace {

double distance_to(const BoatState& state, const Point& p) {
  return std::hypot(p.x - state.x, p.y - state.y);
}

void validate_params(const SimParams& p) {
  if (p.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (p.timeout_s <= 0.0) throw std::invalid_argument("timeout must be positive");
  if (p.arrival_radius_m <= 0.0) throw std::invalid_argument("arrival radius must be positive");
}

}  // namespace

RunLog run_simulation(const fuzzy::RuleBase& rb, const Course& course,
                      const WindSource& wind_at, const SimParams& params) {
  validate_params(params);
  if (course.waypoints.empty()) {
    throw std::invalid_argument("course needs at least one waypoint");
  }

  BoatState state{course.start.x, course.start.y, wrap_360(params.initial_heading), 0.0};
  const bool any_reachable =
      std::any_of(course.waypoints.begin(), course.waypoints.end(),
                  [&](const Point& wp) { return distance_to(state, wp) >= params.arrival_radius_m; });
  if (!any_reachable) {
    throw std::invalid_argument("course is already complete at the start position");
  }

  RunLog log;
  std::size_t wp_index = 0;
  double prev_error = 0.0;
  bool have_prev = false;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * params.dt;
    while (wp_index < course.waypoints.size() &&
           distance_to(state, course.waypoints[wp_index]) < params.arrival_radius_m) {
      ++wp_index;
    }
    if (wp_index == course.waypoints.size()) {
      log.outcome = Outcome::kCompleted;
      break;
    }
    if (t >= params.timeout_s) {
      log.outcome = Outcome::kTimedOut;
      break;
    }

    const wind::WindSample w = wind_at(t);
    const double desired = desired_bearing(state, course.waypoints[wp_index]);
    const double error = bearing_error(desired, state.heading);
    const double derror = have_prev ? wrap_signed(error - prev_error) : 0.0;
    const double rudder = fuzzy::controller_step(rb, error, derror, params.rudder_limit);

    log.records.push_back({t, desired, state.heading, w, state, rudder});
    state = step(state, rudder, w, params);
    prev_error = error;
    have_prev = true;
  }
  return log;
}

RunLog run_simulation(const fuzzy::RuleBase& rb, const Course& course,
                      const wind::WindConfig& cfg, const SimParams& params,
                      std::uint64_t seed) {
  wind::WindProcess proc(cfg, params.wind, params.dt, seed);
  return run_simulation(
      rb, course, [&proc](double) { return proc.next(); }, params);
}

}  // namespace sailperf::sim
