#ifndef RELSTRING_WIGGLY_HPP
#define RELSTRING_WIGGLY_HPP

#include <vector>

#include "relstring/dalembert.hpp"
#include "relstring/periodic_loop.hpp"

namespace relstring {

/// Closed polygon with sub-unit slopes (|c_i| <= 1).
class PiecewiseLinearLoop {
 public:
  /// Validates breakpoints, closure of the seam and |c_i| <= 1.
  PiecewiseLinearLoop(std::vector<double> breakpoints, Points slopes, Vec origin);

  double period() const { return data_.breakpoints.back(); }
  int dimension() const { return static_cast<int>(data_.slopes.rows()); }
  int segments() const { return static_cast<int>(data_.slopes.cols()); }
  const std::vector<double>& breakpoints() const { return data_.breakpoints; }
  const Points& slopes() const { return data_.slopes; }
  const Vec& origin() const { return data_.origin; }
  double min_segment() const;

  const PeriodicLoop& loop() const { return loop_; }
  Vec operator()(double s) const { return loop_(s); }

 private:
  PiecewiseLinearData data_;
  PeriodicLoop loop_;
};

struct SmoothingParams {
  int k = 2;         // zig-zag density, even
  double ell = 0.0;  // corner window width
  double eta = 0.0;  // sup-norm budget, < ell / 3
};

/// Deterministic d with <d, c> = 0 and |d|^2 = 1 - |c|^2.
Vec normal_field(const Vec& c);

/// Unit-speed zig-zag around `a`: every segment is split into k equal pieces
/// whose slopes alternate between c + d and c - d.
PiecewiseLinearLoop zigzag(const PiecewiseLinearLoop& a, int k);

/// Shape of one smoothed corner in its local frame (e1 along the bisector,
/// e2 across it), parameterized by sigma in [-ell/2, ell/2].
struct SmoothedCorner {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double ell = 0.0;
  double alpha = 0.0;  // cap half-width
  double beta = 0.0;   // bump coefficient
  double length = 0.0;  // curve length over the window
  std::vector<double> knots;       // sigma cells covering [-ell/2, ell/2]
  std::vector<double> cumulative;  // arc length at each knot

  /// Position, first and second sigma-derivatives in the local frame.
  Eigen::Matrix<double, 2, 3> local(double sigma) const;
  double speed(double sigma) const;
  /// Length of the window curve from -ell/2 to sigma.
  double arc(double sigma) const;
  /// Inverse of arc() on [0, length].
  double sigma_at(double q) const;
  /// Largest distance from the unmodified wedge (cap height or bump peak).
  double max_offset() const;
};

/// Solves for cap and bump so the window keeps length ell. ParamsInfeasible
/// if tau1 is (numerically) zero or no bracket is found.
SmoothedCorner solve_corner(double tau1, double tau2, double ell, double eta);

/// C^2 unit-speed loop equal to z outside windows of width ell around each
/// corner; the window curves are evaluated in exact arc length.
PeriodicLoop smooth_corners(const PiecewiseLinearLoop& z, const SmoothingParams& params);

/// Smoothed zig-zag pair converging to the sub-unit pair (a, b) as k grows.
DAlembertPair approximate_string(const PiecewiseLinearLoop& a, const PiecewiseLinearLoop& b,
                                 const SmoothingParams& params);

}  // namespace relstring

#endif  // RELSTRING_WIGGLY_HPP
