#ifndef RELSTRING_PERIODIC_LOOP_HPP
#define RELSTRING_PERIODIC_LOOP_HPP

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "relstring/linalg.hpp"
#include "relstring/periodic_spline.hpp"

namespace relstring {

/// Position and first two derivatives of a loop at one parameter value.
struct Jet {
  Vec value;
  Vec d1;
  Vec d2;
};

enum class Backend { Analytic, SampledSpline, PiecewiseLinear };

/// Closed polygonal data: breakpoints 0 = L_0 < ... < L_m = period, one slope
/// per segment (columns of `slopes`) and the point at parameter 0.
struct PiecewiseLinearData {
  std::vector<double> breakpoints;
  Points slopes;
  Vec origin;
};

/// A closed curve R -> R^n with period E. Immutable; copies share the backend.
class PeriodicLoop {
 public:
  using JetFn = std::function<Jet(double)>;

  /// Closed-form loop. `fn` must be `period`-periodic; it is called with
  /// arguments already wrapped into [0, period).
  static PeriodicLoop analytic(double period, int dimension, JetFn fn);

  /// Periodic cubic spline through uniformly spaced samples (one column per
  /// node, node j at parameter j * period / N). Requires N >= 8.
  static PeriodicLoop sampled(const Points& samples, double period);

  /// Sampled loop with known node derivatives (rows x N each); interpolated
  /// by a periodic quintic Hermite spline, so node derivatives are exact.
  static PeriodicLoop sampled_hermite(const Points& samples, const Points& d1, const Points& d2, double period);

  /// Exact piecewise-linear loop. Evaluation uses right derivatives at
  /// breakpoints and a zero second derivative.
  static PeriodicLoop piecewise_linear(PiecewiseLinearData data);

  double period() const { return period_; }
  int dimension() const { return dimension_; }
  Backend backend() const;

  Vec operator()(double s) const { return jet(s).value; }
  Vec derivative(double s) const { return jet(s).d1; }
  Jet jet(double s) const;

  /// True when both handles refer to the same backend object.
  bool shares_backend(const PeriodicLoop& other) const { return impl_ == other.impl_; }

  /// Spline nodes (SampledSpline only, otherwise nullptr).
  const Points* samples() const;
  /// Polygon data (PiecewiseLinear only, otherwise nullptr).
  const PiecewiseLinearData* piecewise() const;
  /// Vertex positions at the breakpoints, columns 0..m (PiecewiseLinear only).
  const Points* vertices() const;

 private:
  struct AnalyticImpl {
    JetFn fn;
  };
  struct SplineImpl {
    PeriodicCubicSpline spline;
  };
  struct HermiteImpl {
    PeriodicQuinticHermite spline;
  };
  struct PolygonImpl {
    PiecewiseLinearData data;
    Points vertices;  // n x (m + 1)
  };
  using Impl = std::variant<AnalyticImpl, SplineImpl, HermiteImpl, PolygonImpl>;

  PeriodicLoop(double period, int dimension, std::shared_ptr<const Impl> impl)
      : period_(period), dimension_(dimension), impl_(std::move(impl)) {}

  double period_ = 0.0;
  int dimension_ = 0;
  std::shared_ptr<const Impl> impl_;
};

/// Initial velocity v0 = gamma_t(0, .) of a string, carried as a loop with the
/// same period and dimension as its companion curve.
class VelocityField {
 public:
  explicit VelocityField(PeriodicLoop field) : field_(std::move(field)) {}

  static VelocityField zero(double period, int dimension);

  const PeriodicLoop& field() const { return field_; }
  double period() const { return field_.period(); }
  int dimension() const { return field_.dimension(); }
  Vec operator()(double s) const { return field_(s); }
  bool is_zero() const { return zero_; }

  /// Integral of v0 over one period.
  Vec integral() const;

 private:
  PeriodicLoop field_;
  bool zero_ = false;
};

}  // namespace relstring

#endif  // RELSTRING_PERIODIC_LOOP_HPP
