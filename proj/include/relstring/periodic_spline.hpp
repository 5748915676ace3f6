#ifndef RELSTRING_PERIODIC_SPLINE_HPP
#define RELSTRING_PERIODIC_SPLINE_HPP

#include "relstring/linalg.hpp"

namespace relstring {

struct SplineEval {
  Vec value;
  Vec d1;
  Vec d2;
};

/// Periodic cubic spline through uniformly spaced samples; each row of the
/// sample matrix is one interpolated component.
class PeriodicCubicSpline {
 public:
  PeriodicCubicSpline() = default;
  /// `samples` is rows x N, node j at parameter j * period / N. N >= 3.
  PeriodicCubicSpline(Points samples, double period);

  using Eval = SplineEval;

  Eval eval(double s) const;
  double period() const { return period_; }
  const Points& values() const { return values_; }
  /// Node values of the spline's second derivative.
  const Points& second() const { return second_; }

 private:
  Points values_;
  Points second_;
  double period_ = 0.0;
  double h_ = 0.0;
};

/// Periodic quintic Hermite interpolant matching values, first and second
/// derivatives at uniformly spaced nodes (C^2, sixth order for smooth data).
class PeriodicQuinticHermite {
 public:
  PeriodicQuinticHermite(Points values, Points d1, Points d2, double period);

  SplineEval eval(double s) const;
  double period() const { return period_; }
  const Points& values() const { return values_; }

 private:
  Points values_;
  Points d1_;
  Points d2_;
  double period_ = 0.0;
  double h_ = 0.0;
};

}  // namespace relstring

#endif  // RELSTRING_PERIODIC_SPLINE_HPP
