#ifndef RELSTRING_CONVEXITY2D_HPP
#define RELSTRING_CONVEXITY2D_HPP

#include <vector>

#include "relstring/dalembert.hpp"

namespace relstring {

struct ConvexityResult {
  bool uniformly_convex = false;
  double margin = 0.0;  // min_x <gamma_xx, nu>, nu = R gamma_x / |gamma_x|
};

/// Planar uniform-convexity test of a regular slice using its exact second
/// derivative (WrongDimension for n != 2, NonRegularCurve for |gamma_x| ~ 0).
ConvexityResult is_uniformly_convex(const StringState& state);

/// Counter-clockwise polygon through the nodes of a planar slice.
class ConvexSlice {
 public:
  /// Builds the polygon; clockwise input is reversed. `margin` is recorded
  /// from is_uniformly_convex when the state carries second derivatives.
  static ConvexSlice from_state(const StringState& state);
  static ConvexSlice from_polygon(Points nodes, double period);

  const Points& nodes() const { return nodes_; }
  double period() const { return period_; }
  double convexity_margin() const { return margin_; }
  double signed_area() const;
  /// Polygon convexity: no right turn beyond `slack` (relative to period^2).
  bool is_convex_polygon(double slack) const;
  /// Point inside or within `slack` of the boundary.
  bool contains(const Eigen::Vector2d& p, double slack) const;

 private:
  ConvexSlice(Points nodes, double period, double margin);
  Points nodes_;
  double period_ = 0.0;
  double margin_ = 0.0;
};

/// True iff every node of `inner` lies in the convex hull of `outer`, with
/// boundary slack inclusion_slack * E. NotConvex if either polygon is not.
bool inclusion_check(const ConvexSlice& inner, const ConvexSlice& outer);

struct ProfileRow {
  double t = 0.0;
  double delta = 0.0;  // t_bar - t
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread() const { return max_ratio / min_ratio - 1.0; }
};

/// Nodal extremes of |gamma(t, x) - p| / (t_bar - t) for each t < t_bar.
/// NoCollapseAtTbar unless detect_collapse at t_bar finds p.
std::vector<ProfileRow> collapse_profile(const DAlembertPair& pair, double t_bar, const Vec& p,
                                         const std::vector<double>& times, int N = 1024);

}  // namespace relstring

#endif  // RELSTRING_CONVEXITY2D_HPP
