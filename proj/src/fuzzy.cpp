#include "sailperf/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sailperf::fuzzy {

namespace {

void validate_triangle(const TriangularSet& s) {
  if (!(s.left <= s.apex && s.apex <= s.right) || !(s.left < s.right)) {
    throw std::invalid_argument("triangular set requires left <= apex <= right and left < right");
  }
}

}  // namespace

double membership_t1(const TriangularSet& s, double x) {
  return membership_t1(s, Shoulder::kNone, x);
}

double membership_t1(const TriangularSet& s, Shoulder shoulder, double x) {
  if (shoulder == Shoulder::kLeft && x <= s.apex) return 1.0;
  if (shoulder == Shoulder::kRight && x >= s.apex) return 1.0;
  if (x < s.left || x > s.right) return 0.0;
  if (x < s.apex) return (x - s.left) / (s.apex - s.left);
  if (x > s.apex) return (s.right - x) / (s.right - s.apex);
  return 1.0;
}

IntervalDegree membership_it2(const IT2Set& set, double x) {
  const double d = set.shift;
  if (d == 0.0) {
    const double m = membership_t1(set.base, set.shoulder, x);
    return {m, m};
  }
  const TriangularSet lo_tri{set.base.left - d, set.base.apex - d, set.base.right - d};
  const TriangularSet hi_tri{set.base.left + d, set.base.apex + d, set.base.right + d};
  switch (set.shoulder) {
    case Shoulder::kLeft:
      // One-sided ramps: the left-shifted copy is the pointwise minimum of
      // the family, the right-shifted one the maximum.
      return {membership_t1(lo_tri, Shoulder::kLeft, x),
              membership_t1(hi_tri, Shoulder::kLeft, x)};
    case Shoulder::kRight:
      return {membership_t1(hi_tri, Shoulder::kRight, x),
              membership_t1(lo_tri, Shoulder::kRight, x)};
    case Shoulder::kNone:
    default: {
      const double lower = std::min(membership_t1(lo_tri, x), membership_t1(hi_tri, x));
      // Upper envelope is the trapezoid (left-d, apex-d, apex+d, right+d)
      // with the original flank slopes.
      double upper;
      if (x < set.base.apex - d) {
        upper = membership_t1(lo_tri, x);
      } else if (x > set.base.apex + d) {
        upper = membership_t1(hi_tri, x);
      } else {
        upper = 1.0;
      }
      return {lower, upper};
    }
  }
}

RuleBase make_rule_base(const ControllerLayout& layout, double fou_size) {
  if (fou_size < 0.0) {
    throw std::invalid_argument("FOU size must be non-negative");
  }
  if (layout.half_width <= 0.0) {
    throw std::invalid_argument("set half-width must be positive");
  }
  const double shift = fou_size / 2.0;
  if (shift >= layout.half_width) {
    throw std::invalid_argument(
        "FOU size too large: apex shift must stay below the set half-width "
        "so the lower membership function keeps positive height");
  }

  RuleBase rb;
  for (int i = 0; i < 5; ++i) {
    if (i > 0 && !(layout.input_apexes[i - 1] < layout.input_apexes[i])) {
      throw std::invalid_argument("input apexes must be strictly increasing");
    }
    const double apex = layout.input_apexes[i];
    const TriangularSet base{apex - layout.half_width, apex, apex + layout.half_width};
    validate_triangle(base);
    const Shoulder sh =
        i == 0 ? Shoulder::kLeft : (i == 4 ? Shoulder::kRight : Shoulder::kNone);
    rb.error_sets[i] = IT2Set{base, shift, sh};
    rb.derror_sets[i] = rb.error_sets[i];
  }

  for (int i = 1; i < 5; ++i) {
    if (!(layout.singletons[i - 1] < layout.singletons[i])) {
      throw std::invalid_argument("singleton values must be strictly increasing");
    }
  }
  rb.singleton_values = layout.singletons;

  if (layout.consequents) {
    rb.consequents = *layout.consequents;
    for (const auto& row : rb.consequents) {
      for (int c : row) {
        if (c < 0 || c > 4) throw std::invalid_argument("consequent index out of range");
      }
    }
  } else {
    // Anti-diagonal PD grid: stronger corrective action the further the
    // combined (error, delta error) state is from the centre cell.
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        rb.consequents[i][j] = std::clamp(i + j - 4, -2, 2) + 2;
      }
    }
  }
  return rb;
}

std::array<FiringInterval, 25> fire_rules(const RuleBase& rb, double error,
                                          double derror) {
  std::array<IntervalDegree, 5> e_mu;
  std::array<IntervalDegree, 5> de_mu;
  for (int i = 0; i < 5; ++i) {
    e_mu[i] = membership_it2(rb.error_sets[i], error);
    de_mu[i] = membership_it2(rb.derror_sets[i], derror);
  }
  std::array<FiringInterval, 25> out;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      out[i * 5 + j] = {std::min(e_mu[i].lower, de_mu[j].lower),
                        std::min(e_mu[i].upper, de_mu[j].upper),
                        rb.singleton_values[rb.consequents[i][j]]};
    }
  }
  return out;
}

namespace {

// Weighted average under a switch-point endpoint assignment. For the left
// bound the upper grades are used at or below the switch index and the lower
// grades above it; mirrored for the right bound. Returns nullopt on a zero
// denominator.
std::optional<double> switch_average(const std::vector<FiringInterval>& rules,
                                     int switch_index, bool left_bound) {
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < static_cast<int>(rules.size()); ++i) {
    const bool use_upper = left_bound ? (i <= switch_index) : (i > switch_index);
    const double f = use_upper ? rules[i].upper : rules[i].lower;
    num += f * rules[i].consequent;
    den += f;
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

// Exhaustive scan over the n+1 switch assignments. Only needed when the
// iterative procedure lands on a zero-denominator assignment (possible when
// many lower grades are exactly zero).
double exhaustive_bound(const std::vector<FiringInterval>& rules, bool left_bound) {
  std::optional<double> best;
  for (int k = -1; k < static_cast<int>(rules.size()); ++k) {
    const auto y = switch_average(rules, k, left_bound);
    if (!y) continue;
    if (!best || (left_bound ? *y < *best : *y > *best)) best = *y;
  }
  return *best;  // at least one assignment uses every upper grade
}

// Karnik-Mendel iteration for one bound over consequent-sorted rules.
double km_bound(const std::vector<FiringInterval>& rules, bool left_bound) {
  const int n = static_cast<int>(rules.size());
  if (n == 1) return rules[0].consequent;

  double num = 0.0;
  double den = 0.0;
  for (const auto& r : rules) {
    const double f = 0.5 * (r.lower + r.upper);
    num += f * r.consequent;
    den += f;
  }
  double y = num / den;  // den > 0: at least one upper grade is positive

  int prev_switch = -2;
  for (int iter = 0; iter < n + 2; ++iter) {
    int k = 0;
    for (int i = 0; i < n - 1; ++i) {
      if (rules[i].consequent <= y) k = i;
    }
    const auto next = switch_average(rules, k, left_bound);
    if (!next) return exhaustive_bound(rules, left_bound);
    y = *next;
    if (k == prev_switch) break;
    prev_switch = k;
  }
  return y;
}

}  // namespace

std::optional<OutputInterval> km_type_reduce(
    std::span<const FiringInterval> firings) {
  std::vector<FiringInterval> rules(firings.begin(), firings.end());
  double upper_sum = 0.0;
  for (const auto& r : rules) upper_sum += r.upper;
  if (rules.empty() || upper_sum <= 0.0) return std::nullopt;

  std::stable_sort(rules.begin(), rules.end(),
                   [](const FiringInterval& a, const FiringInterval& b) {
                     return a.consequent < b.consequent;
                   });
  return OutputInterval{km_bound(rules, true), km_bound(rules, false)};
}

double defuzzify(const OutputInterval& interval, double rudder_limit) {
  return std::clamp(0.5 * (interval.left + interval.right), -rudder_limit,
                    rudder_limit);
}

double controller_step(const RuleBase& rb, double error, double derror,
                       double rudder_limit) {
  const double e = std::clamp(error, rb.universe_min(), rb.universe_max());
  const double de = std::clamp(derror, rb.universe_min(), rb.universe_max());
  const auto firings = fire_rules(rb, e, de);
  const auto reduced = km_type_reduce(firings);
  if (!reduced) return 0.0;
  return defuzzify(*reduced, rudder_limit);
}

}  // namespace sailperf::fuzzy
