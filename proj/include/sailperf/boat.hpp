#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sailperf/fuzzy.hpp"
#include "sailperf/wind.hpp"

namespace sailperf::sim {

/// Position in metres, x east, y north.
struct Point {
  double x{};
  double y{};
};

struct BoatState {
  double x{0.0};
  double y{0.0};
  double heading{90.0};  // degrees, 0 = due north, clockwise positive
  double speed{0.0};     // m/s
};

struct Course {
  Point start{};
  std::vector<Point> waypoints{};
  int vertical_offset{};  // metres
};

/// The three course layouts: a 250 m easterly leg deflected north by the
/// offset, then back to (500, 0). The turn required off the course axis is
/// arctan(offset / 250): 5.71, 11.31 and 21.80 degrees. single_leg drops the
/// return leg. Throws std::invalid_argument for offsets other than
/// 25, 50, 100.
Course course_from_offset(int offset_m, bool single_leg = false);

/// Bearing of the course axis (start to final waypoint).
double course_bearing(const Course& course);

/// Angle of the first leg off due east, degrees.
double turn_angle_deg(const Course& course);

/// Piecewise-linear map from apparent-wind angle (degrees off the bow,
/// [0, 180]) to the fraction of wind speed the boat attains.
struct PolarPoint {
  double angle_deg{};
  double fraction{};
};

/// No drive below 30 degrees (no-go zone), 0.5 at a beam reach, easing to
/// 0.4 dead downwind.
std::vector<PolarPoint> default_polar();

struct SimParams {
  double dt{0.1};               // seconds
  double timeout_s{600.0};
  double arrival_radius_m{5.0};
  double rudder_limit{45.0};    // degrees
  double turn_gain{0.5};        // deg heading per deg rudder per second
  double initial_heading{90.0}; // course axis
  bool single_leg{false};
  std::vector<PolarPoint> polar{default_polar()};
  wind::WindParams wind{};
};

struct LogRecord {
  double t{};
  double desired_bearing{};
  double actual_bearing{};
  wind::WindSample wind{};
  BoatState boat{};
  double rudder{};
};

enum class Outcome { kCompleted, kTimedOut };

struct RunLog {
  std::vector<LogRecord> records{};
  Outcome outcome{Outcome::kTimedOut};
};

/// Compass bearing from the boat to a waypoint. Throws
/// std::invalid_argument when the two points coincide.
double desired_bearing(const BoatState& state, const Point& wp);

/// Signed smallest angular difference desired - actual, in (-180, 180].
/// Positive means turn clockwise; antipodal ties resolve to +180.
double bearing_error(double desired, double actual);

/// Boat speed for a given apparent-wind angle and wind speed.
double polar_speed(double apparent_angle_deg, double wind_speed,
                   std::span<const PolarPoint> polar);

/// One kinematic step: turn by turn_gain * rudder * dt, take speed from the
/// polar at the new heading, advance position along the heading.
BoatState step(const BoatState& state, double rudder,
               const wind::WindSample& wind, const SimParams& params);

/// Wind samples for the control loop, one call per step.
using WindSource = std::function<wind::WindSample(double t)>;

/// Closed-loop run with an injected wind source (used by tests and by the
/// seeded overload below).
RunLog run_simulation(const fuzzy::RuleBase& rb, const Course& course,
                      const WindSource& wind_at, const SimParams& params);

/// Closed-loop run under the seeded stochastic wind process.
RunLog run_simulation(const fuzzy::RuleBase& rb, const Course& course,
                      const wind::WindConfig& cfg, const SimParams& params,
                      std::uint64_t seed);

}  // namespace sailperf::sim
