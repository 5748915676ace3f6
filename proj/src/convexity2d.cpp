#include "relstring/convexity2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relstring/errors.hpp"

namespace relstring {

namespace {

Points central_difference_xx(const StringState& state) {
  const int n = state.size();
  const double h = state.spacing();
  Points out(state.dimension(), n);
  for (int j = 0; j < n; ++j)
    out.col(j) = (state.gamma_x.col((j + 1) % n) - state.gamma_x.col((j + n - 1) % n)) / (2.0 * h);
  return out;
}

}  // namespace

ConvexityResult is_uniformly_convex(const StringState& state) {
  if (state.dimension() != 2) fail(ErrorCode::WrongDimension, "convexity test is planar");
  const Points xx = state.has_second_derivatives() ? state.gamma_xx : central_difference_xx(state);
  ConvexityResult out;
  out.margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < state.size(); ++j) {
    const Eigen::Vector2d gx = state.gamma_x.col(j);
    const double speed = gx.norm();
    if (speed < tolerances().slice_regular)
      fail(ErrorCode::NonRegularCurve, "|gamma_x| = " + std::to_string(speed) + " at node " + std::to_string(j));
    const Eigen::Vector2d nu = rotate_ccw(gx) / speed;
    out.margin = std::min(out.margin, nu.dot(Eigen::Vector2d(xx.col(j))));
  }
  out.uniformly_convex = out.margin > 0.0;
  return out;
}

ConvexSlice::ConvexSlice(Points nodes, double period, double margin)
    : nodes_(std::move(nodes)), period_(period), margin_(margin) {
  if (signed_area() < 0.0) nodes_ = nodes_.rowwise().reverse().eval();
}

ConvexSlice ConvexSlice::from_state(const StringState& state) {
  if (state.dimension() != 2) fail(ErrorCode::WrongDimension, "convex slices are planar");
  double margin = std::numeric_limits<double>::quiet_NaN();
  if (column_norms(state.gamma_x).minCoeff() >= tolerances().slice_regular)
    margin = is_uniformly_convex(state).margin;
  return ConvexSlice(state.gamma, state.period, margin);
}

ConvexSlice ConvexSlice::from_polygon(Points nodes, double period) {
  if (nodes.rows() != 2) fail(ErrorCode::WrongDimension, "convex slices are planar");
  return ConvexSlice(std::move(nodes), period, std::numeric_limits<double>::quiet_NaN());
}

double ConvexSlice::signed_area() const {
  const Eigen::Index n = nodes_.cols();
  double twice = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    twice += nodes_(0, i) * nodes_(1, j) - nodes_(0, j) * nodes_(1, i);
  }
  return 0.5 * twice;
}

bool ConvexSlice::is_convex_polygon(double slack) const {
  const Eigen::Index n = nodes_.cols();
  const double bound = slack * period_ * period_;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d e0 = nodes_.col((i + 1) % n) - nodes_.col(i);
    const Eigen::Vector2d e1 = nodes_.col((i + 2) % n) - nodes_.col((i + 1) % n);
    if (cross2(e0, e1) < -bound) return false;
  }
  return true;
}

bool ConvexSlice::contains(const Eigen::Vector2d& p, double slack) const {
  const Eigen::Index n = nodes_.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d v0 = nodes_.col(i);
    const Eigen::Vector2d e = Eigen::Vector2d(nodes_.col((i + 1) % n)) - v0;
    const double len = e.norm();
    if (len == 0.0) continue;
    if (cross2(e, p - v0) / len < -slack) return false;
  }
  return true;
}

bool inclusion_check(const ConvexSlice& inner, const ConvexSlice& outer) {
  const double slack = tolerances().inclusion_slack;
  if (!inner.is_convex_polygon(slack)) fail(ErrorCode::NotConvex, "inner slice is not convex");
  if (!outer.is_convex_polygon(slack)) fail(ErrorCode::NotConvex, "outer slice is not convex");
  const double boundary = slack * outer.period();
  for (Eigen::Index i = 0; i < inner.nodes().cols(); ++i)
    if (!outer.contains(inner.nodes().col(i), boundary)) return false;
  return true;
}

std::vector<ProfileRow> collapse_profile(const DAlembertPair& pair, double t_bar, const Vec& p,
                                         const std::vector<double>& times, int N) {
  const CollapseCheck check = detect_collapse(pair, t_bar, N);
  if (!check.point || (*check.point - p).norm() > tolerances().collapse * pair.period())
    fail(ErrorCode::NoCollapseAtTbar, "no collapse to the given point at t = " + std::to_string(t_bar));

  std::vector<ProfileRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    if (!(t < t_bar)) fail(ErrorCode::BadParams, "profile times must precede t_bar");
    const StringState st = evaluate_state(pair, t, N);
    const Vec dist = (st.gamma.colwise() - p).colwise().norm().transpose();
    ProfileRow row;
    row.t = t;
    row.delta = t_bar - t;
    row.max_ratio = dist.maxCoeff() / row.delta;
    row.min_ratio = dist.minCoeff() / row.delta;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace relstring
