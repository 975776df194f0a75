#pragma once

#include <array>
#include <optional>
#include <span>

namespace sailperf::fuzzy {

/// Triangular membership function on a degree-valued universe.
/// Grade is 1 at the apex, 0 outside [left, right], linear on each flank.
struct TriangularSet {
  double left{};
  double apex{};
  double right{};
};

/// Saturation behaviour for the outermost sets of an input partition: a
/// left shoulder holds grade 1 everywhere below its apex, a right shoulder
/// everywhere above.
enum class Shoulder { kNone, kLeft, kRight };

/// Interval type-2 set built from a triangular base whose apex is shifted
/// horizontally by +/- shift (half the footprint-of-uncertainty size).
/// shift == 0 collapses to the type-1 base set exactly.
struct IT2Set {
  TriangularSet base{};
  double shift{0.0};
  Shoulder shoulder{Shoulder::kNone};
};

struct IntervalDegree {
  double lower{};
  double upper{};
};

/// Activation strength of one rule together with its singleton consequent.
struct FiringInterval {
  double lower{};
  double upper{};
  double consequent{};  // rudder angle, degrees
};

/// 5x5 rule grid over (bearing error, delta error) with five singleton
/// rudder consequents.
struct RuleBase {
  std::array<IT2Set, 5> error_sets{};
  std::array<IT2Set, 5> derror_sets{};
  std::array<std::array<int, 5>, 5> consequents{};  // index into singleton_values
  std::array<double, 5> singleton_values{};

  double universe_min() const { return error_sets.front().base.apex; }
  double universe_max() const { return error_sets.back().base.apex; }
};

/// Symmetric five-set layout from which a RuleBase is generated for each
/// footprint-of-uncertainty size. The default is five evenly spaced
/// triangles on [-60, 60] with shoulders at the edges and an anti-diagonal
/// PD rule grid over singletons {-45, -22.5, 0, 22.5, 45}.
struct ControllerLayout {
  std::array<double, 5> input_apexes{-60.0, -30.0, 0.0, 30.0, 60.0};
  double half_width{30.0};
  std::array<double, 5> singletons{-45.0, -22.5, 0.0, 22.5, 45.0};
  std::optional<std::array<std::array<int, 5>, 5>> consequents{};
};

struct OutputInterval {
  double left{};
  double right{};
};

double membership_t1(const TriangularSet& set, double x);
double membership_t1(const TriangularSet& set, Shoulder shoulder, double x);

/// Upper/lower membership envelopes of the apex-shifted triangle family.
IntervalDegree membership_it2(const IT2Set& set, double x);

/// Builds the 25-rule base for one FOU size (FOU size = total apex spread,
/// i.e. apex shift = fou_size / 2). Throws std::invalid_argument if the
/// layout is malformed or the FOU is too wide for the set half-width.
RuleBase make_rule_base(const ControllerLayout& layout, double fou_size);

/// Minimum t-norm rule activation. Inputs are expected to be inside the
/// universe (the controller clamps them).
std::array<FiringInterval, 25> fire_rules(const RuleBase& rb, double error,
                                          double derror);

/// Karnik-Mendel iterative type reduction over singleton consequents.
/// Returns the extremes [y_l, y_r] of the interval weighted average
/// sum(f_i * y_i) / sum(f_i) over f_i in [lower_i, upper_i], or nullopt when
/// every upper grade is zero (no rule fires).
std::optional<OutputInterval> km_type_reduce(
    std::span<const FiringInterval> firings);

/// Midpoint of the type-reduced interval, clamped to the rudder limit.
double defuzzify(const OutputInterval& interval, double rudder_limit = 45.0);

/// Full inference step: clamp inputs to the universe, fire rules, type
/// reduce, defuzzify. Returns rudder 0 when no rule fires.
double controller_step(const RuleBase& rb, double error, double derror,
                       double rudder_limit = 45.0);

}  // namespace sailperf::fuzzy
