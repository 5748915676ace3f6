#ifndef RELSTRING_DALEMBERT_HPP
#define RELSTRING_DALEMBERT_HPP

#include <optional>
#include <vector>

#include "relstring/periodic_loop.hpp"
#include "relstring/string_state.hpp"
#include "relstring/tolerances.hpp"

namespace relstring {

enum class ConstraintMode {
  UnitSpeed,  // |a'| = |b'| = 1
  SubUnit,    // |a'|, |b'| <= 1
};

/// The pair (a, b) of E-periodic loops with gamma(t, x) = [a(x+t) + b(x-t)] / 2.
/// Construction checks that both loops share period and dimension and that
/// the speed constraint of `mode` holds at sample nodes.
class DAlembertPair {
 public:
  DAlembertPair(PeriodicLoop a, PeriodicLoop b, ConstraintMode mode);

  const PeriodicLoop& a() const { return a_; }
  const PeriodicLoop& b() const { return b_; }
  double period() const { return a_.period(); }
  int dimension() const { return a_.dimension(); }
  ConstraintMode mode() const { return mode_; }

  /// True when b coincides with a (zero initial velocity).
  bool zero_initial_velocity() const;

 private:
  PeriodicLoop a_;
  PeriodicLoop b_;
  ConstraintMode mode_;
};

/// Extremes of | |loop'| - 1 | and of |loop'| over the check nodes (the spline
/// nodes for sampled loops, 1024 uniform points otherwise).
struct SpeedStats {
  double max_unit_deviation = 0.0;
  double max_speed = 0.0;
  double min_speed = 0.0;
};
SpeedStats speed_stats(const PeriodicLoop& loop);

/// Splits conformal-gauge initial data into a = gamma0 + V, b = gamma0 - V
/// with V(x) = int_0^x v0. Zero velocity returns a = b = curve unchanged;
/// otherwise the pair is sampled on the curve's own nodes, or on N nodes for
/// non-sampled curves.
DAlembertPair decompose(const PeriodicLoop& curve, const VelocityField& velocity, int N = 1024);

/// Exact evaluation of the slice at time t (any real t) on N uniform nodes.
StringState evaluate_state(const DAlembertPair& pair, double t, int N);

struct CollapseTimes {
  Vec grid;
  Vec t_of_x;
  double t_min = 0.0;
  double t_max = 0.0;
};

/// For a = b planar uniformly convex data: the unique t(x) in (0, E/2) with
/// a'(x + t) + a'(x - t) = 0 at every node.
CollapseTimes collapse_time_map(const DAlembertPair& pair, int N = 512);

struct CollapseCheck {
  std::optional<Vec> point;
  double max_deviation = 0.0;        // max |gamma - mean|
  double extinction_residual = 0.0;  // max |a'(x+t) + b'(x-t)|
};

/// Collapse test at time t: the slice is a point when every node is within
/// tol * E of the nodal mean. tol defaults to the configured `collapse` value.
CollapseCheck detect_collapse(const DAlembertPair& pair, double t, int N, std::optional<double> tol = std::nullopt);

struct SingularInterval {
  int first_node = 0;
  int count = 0;
  double start = 0.0;   // parameter of the first node
  double length = 0.0;  // count * h
  double center = 0.0;  // wrapped into [0, E)
};

/// Maximal periodic runs of nodes with |gamma_x| < tol.
std::vector<SingularInterval> singular_set(const DAlembertPair& pair, double t, int N,
                                           std::optional<double> tol = std::nullopt);

}  // namespace relstring

#endif  // RELSTRING_DALEMBERT_HPP
