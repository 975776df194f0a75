#pragma once

// Independent reference implementations used as test oracles. Nothing here
// shares code with the library beyond the public data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "sailperf/fuzzy.hpp"

namespace reference {

// Plain triangular grade with optional shoulder saturation, written from
// the definition rather than reusing the library's membership code.
inline double tri_grade(double left, double apex, double right,
                        bool left_shoulder, bool right_shoulder, double x) {
  if (left_shoulder && x <= apex) return 1.0;
  if (right_shoulder && x >= apex) return 1.0;
  if (x < left || x > right) return 0.0;
  if (x == apex) return 1.0;
  if (x < apex) return (x - left) / (apex - left);
  return (right - x) / (right - apex);
}

// Type-1 inference over the same 5x5 layout: min t-norm, singleton
// consequents, weighted-average defuzzification. The FOU-0 controller must
// agree with this exactly (within float noise).
inline std::optional<double> type1_output(
    const sailperf::fuzzy::ControllerLayout& layout, double error,
    double derror) {
  const auto& apexes = layout.input_apexes;
  const double lo = apexes.front();
  const double hi = apexes.back();
  const double e = std::clamp(error, lo, hi);
  const double de = std::clamp(derror, lo, hi);

  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double mu_e =
        tri_grade(apexes[static_cast<std::size_t>(i)] - layout.half_width,
                  apexes[static_cast<std::size_t>(i)],
                  apexes[static_cast<std::size_t>(i)] + layout.half_width,
                  i == 0, i == 4, e);
    for (int j = 0; j < 5; ++j) {
      const double mu_d =
          tri_grade(apexes[static_cast<std::size_t>(j)] - layout.half_width,
                    apexes[static_cast<std::size_t>(j)],
                    apexes[static_cast<std::size_t>(j)] + layout.half_width,
                    j == 0, j == 4, de);
      const double f = std::min(mu_e, mu_d);
      int k;
      if (layout.consequents) {
        k = (*layout.consequents)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      } else {
        k = std::clamp(i + j - 4, -2, 2) + 2;
      }
      num += f * layout.singletons[static_cast<std::size_t>(k)];
      den += f;
    }
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

// Exhaustive type reduction: the interval weighted average is monotone in
// each firing strength, so its extremes sit at interval endpoints;
// enumerating all 2^N endpoint assignments is exact for small N.
inline std::optional<std::pair<double, double>> brute_force_reduce(
    std::span<const sailperf::fuzzy::FiringInterval> firings) {
  const std::size_t n = firings.size();
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = (mask >> i) & 1 ? firings[i].upper : firings[i].lower;
      num += f * firings[i].consequent;
      den += f;
    }
    if (den <= 0.0) continue;
    const double v = num / den;
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!any) return std::nullopt;
  return std::make_pair(lo, hi);
}

// Standard deviation of a zero-mean Gaussian with deviation sigma clamped
// (not truncated: mass piles up at the bounds) to +/- a standard
// deviations: Var = (2 Phi(a) - 1) - 2 a phi(a) + 2 a^2 (1 - Phi(a)),
// scaled by sigma^2.
inline double clipped_normal_sd(double sigma, double a) {
  const double phi = std::exp(-a * a / 2.0) / std::sqrt(2.0 * M_PI);
  const double cdf = 0.5 * std::erfc(-a / std::sqrt(2.0));
  const double ex2 = (2.0 * cdf - 1.0) - 2.0 * a * phi + 2.0 * a * a * (1.0 - cdf);
  return sigma * std::sqrt(ex2);
}

}  // namespace reference
