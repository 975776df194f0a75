#pragma once

#include <cmath>

namespace sailperf {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle to [0, 360).
inline double wrap_360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod can round -eps + 360 back up to 360
  return r;
}

/// Wraps an angle difference to (-180, 180]. Antipodal inputs map to +180.
inline double wrap_signed(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) {
    r += 360.0;
  } else if (r > 180.0) {
    r -= 360.0;
  }
  return r;
}

/// Compass bearing (degrees, 0 = due north, clockwise) of the vector
/// (east, north).
inline double bearing_of(double east, double north) {
  return wrap_360(rad2deg(std::atan2(east, north)));
}

}  // namespace sailperf
