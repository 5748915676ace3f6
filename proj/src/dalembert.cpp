#include "relstring/dalembert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relstring/convexity2d.hpp"
#include "relstring/errors.hpp"
#include "relstring/quadrature.hpp"

namespace relstring {

namespace {

constexpr int kCheckNodes = 1024;

Vec check_nodes(const PeriodicLoop& loop) {
  if (const Points* nodes = loop.samples()) return periodic_grid(loop.period(), static_cast<int>(nodes->cols()));
  return periodic_grid(loop.period(), kCheckNodes);
}

// CCW angle from u to v in [0, 2 pi).
double ccw_angle(const Vec& u, const Vec& v) {
  double ang = std::atan2(cross2(u, v), u.dot(v));
  if (ang < 0.0) ang += 2.0 * std::numbers::pi;
  return ang;
}

}  // namespace

SpeedStats speed_stats(const PeriodicLoop& loop) {
  SpeedStats st;
  st.min_speed = std::numeric_limits<double>::infinity();
  const Vec nodes = check_nodes(loop);
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    const double sp = loop.derivative(nodes(i)).norm();
    st.max_unit_deviation = std::max(st.max_unit_deviation, std::abs(sp - 1.0));
    st.max_speed = std::max(st.max_speed, sp);
    st.min_speed = std::min(st.min_speed, sp);
  }
  return st;
}

DAlembertPair::DAlembertPair(PeriodicLoop a, PeriodicLoop b, ConstraintMode mode)
    : a_(std::move(a)), b_(std::move(b)), mode_(mode) {
  if (a_.dimension() != b_.dimension()) fail(ErrorCode::WrongDimension, "a and b differ in dimension");
  if (std::abs(a_.period() - b_.period()) > 1e-12 * a_.period())
    fail(ErrorCode::InvalidLoop, "a and b differ in period");
  const auto& tol = tolerances();
  for (const PeriodicLoop* loop : {&a_, &b_}) {
    const SpeedStats st = speed_stats(*loop);
    if (mode_ == ConstraintMode::UnitSpeed && st.max_unit_deviation > tol.unit_speed)
      fail(ErrorCode::NotNormalized,
           "UnitSpeed pair has | |loop'| - 1 | = " + std::to_string(st.max_unit_deviation));
    if (mode_ == ConstraintMode::SubUnit && st.max_speed > 1.0 + tol.sub_unit)
      fail(ErrorCode::NotNormalized, "SubUnit pair has |loop'| = " + std::to_string(st.max_speed));
  }
}

bool DAlembertPair::zero_initial_velocity() const {
  if (a_.shares_backend(b_)) return true;
  const Vec nodes = periodic_grid(period(), 256);
  for (Eigen::Index i = 0; i < nodes.size(); ++i)
    if ((a_(nodes(i)) - b_(nodes(i))).norm() > 1e-12 * std::max(1.0, period())) return false;
  return true;
}

DAlembertPair decompose(const PeriodicLoop& curve, const VelocityField& velocity, int N) {
  if (curve.dimension() != velocity.dimension()) fail(ErrorCode::WrongDimension, "velocity dimension mismatch");
  if (std::abs(curve.period() - velocity.period()) > 1e-12 * curve.period())
    fail(ErrorCode::InvalidLoop, "velocity period differs from curve period");
  const auto& tol = tolerances();
  const double E = curve.period();

  const Vec nodes = check_nodes(curve);
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    const double g = curve.derivative(nodes(i)).squaredNorm() + velocity(nodes(i)).squaredNorm();
    if (std::abs(g - 1.0) > tol.normalization)
      fail(ErrorCode::NotNormalized, "|gamma'|^2 + |v0|^2 = " + std::to_string(g) + " at s = " + std::to_string(nodes(i)));
  }
  const Vec mean = velocity.integral();
  if (mean.norm() > tol.zero_mean * E)
    fail(ErrorCode::NonZeroMeanVelocity, "|int v0| = " + std::to_string(mean.norm()));

  if (velocity.is_zero()) return DAlembertPair(curve, curve, ConstraintMode::UnitSpeed);

  const int n = curve.samples() ? static_cast<int>(curve.samples()->cols()) : N;
  const int dim = curve.dimension();
  const double h = E / n;
  Points a(dim, n), a1(dim, n), a2(dim, n);
  Points b(dim, n), b1(dim, n), b2(dim, n);
  Vec primitive = Vec::Zero(dim);
  for (int j = 0; j < n; ++j) {
    if (j > 0) {
      for (int c = 0; c < dim; ++c)
        primitive(c) += quad::gauss_legendre([&](double s) { return velocity(s)(c); }, (j - 1) * h, j * h);
    }
    const Jet g = curve.jet(j * h);
    const Jet v = velocity.field().jet(j * h);
    a.col(j) = g.value + primitive;
    b.col(j) = g.value - primitive;
    a1.col(j) = g.d1 + v.value;
    b1.col(j) = g.d1 - v.value;
    a2.col(j) = g.d2 + v.d1;
    b2.col(j) = g.d2 - v.d1;
  }
  return DAlembertPair(PeriodicLoop::sampled_hermite(a, a1, a2, E), PeriodicLoop::sampled_hermite(b, b1, b2, E),
                       ConstraintMode::UnitSpeed);
}

StringState evaluate_state(const DAlembertPair& pair, double t, int N) {
  StringState st;
  st.t = t;
  st.period = pair.period();
  st.grid = periodic_grid(pair.period(), N);
  const int n = pair.dimension();
  st.gamma.resize(n, N);
  st.gamma_t.resize(n, N);
  st.gamma_x.resize(n, N);
  st.gamma_tt.resize(n, N);
  st.gamma_tx.resize(n, N);
  st.gamma_xx.resize(n, N);
  for (int j = 0; j < N; ++j) {
    const double x = st.grid(j);
    const Jet ja = pair.a().jet(x + t);
    const Jet jb = pair.b().jet(x - t);
    st.gamma.col(j) = 0.5 * (ja.value + jb.value);
    st.gamma_t.col(j) = 0.5 * (ja.d1 - jb.d1);
    st.gamma_x.col(j) = 0.5 * (ja.d1 + jb.d1);
    st.gamma_xx.col(j) = 0.5 * (ja.d2 + jb.d2);
    st.gamma_tt.col(j) = st.gamma_xx.col(j);
    st.gamma_tx.col(j) = 0.5 * (ja.d2 - jb.d2);
  }
  return st;
}

CollapseTimes collapse_time_map(const DAlembertPair& pair, int N) {
  if (pair.dimension() != 2) fail(ErrorCode::WrongDimension, "collapse_time_map is planar");
  if (!pair.zero_initial_velocity()) fail(ErrorCode::NotZeroVelocity, "collapse_time_map requires a = b");
  if (pair.mode() != ConstraintMode::UnitSpeed) fail(ErrorCode::NotNormalized, "collapse_time_map requires UnitSpeed");
  const ConvexityResult conv = is_uniformly_convex(evaluate_state(pair, 0.0, N));
  if (!conv.uniformly_convex)
    fail(ErrorCode::NotConvex, "initial slice not uniformly convex (margin " + std::to_string(conv.margin) + ")");

  const PeriodicLoop& a = pair.a();
  const double half = 0.5 * pair.period();
  auto turning = [&](double x, double t) { return ccw_angle(a.derivative(x - t), a.derivative(x + t)); };

  CollapseTimes out;
  out.grid = periodic_grid(pair.period(), N);
  out.t_of_x.resize(N);
  constexpr int kProbe = 32;
  for (int j = 0; j < N; ++j) {
    const double x = out.grid(j);
    double prev = 0.0;
    for (int k = 1; k < kProbe; ++k) {
      const double g = turning(x, half * k / kProbe);
      if (g < prev) fail(ErrorCode::RootNotBracketed, "turning angle not monotone at x = " + std::to_string(x));
      prev = g;
    }
    double lo = 0.0;
    double hi = half;
    for (int it = 0; it < 80 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (turning(x, mid) < std::numbers::pi) lo = mid; else hi = mid;
    }
    out.t_of_x(j) = 0.5 * (lo + hi);
  }
  out.t_min = out.t_of_x.minCoeff();
  out.t_max = out.t_of_x.maxCoeff();
  return out;
}

CollapseCheck detect_collapse(const DAlembertPair& pair, double t, int N, std::optional<double> tol) {
  const double rel = tol.value_or(tolerances().collapse);
  const StringState st = evaluate_state(pair, t, N);
  CollapseCheck out;
  const Vec mean = st.gamma.rowwise().mean();
  out.max_deviation = (st.gamma.colwise() - mean).colwise().norm().maxCoeff();
  out.extinction_residual = 2.0 * st.gamma_x.colwise().norm().maxCoeff();
  if (out.max_deviation <= rel * pair.period()) out.point = mean;
  return out;
}

std::vector<SingularInterval> singular_set(const DAlembertPair& pair, double t, int N, std::optional<double> tol) {
  const double thr = tol.value_or(tolerances().singular);
  const StringState st = evaluate_state(pair, t, N);
  const Vec speed = column_norms(st.gamma_x);
  std::vector<char> flag(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) flag[j] = speed(j) < thr;

  std::vector<SingularInterval> out;
  if (std::all_of(flag.begin(), flag.end(), [](char f) { return f; })) {
    out.push_back({0, N, 0.0, pair.period(), 0.5 * pair.period()});
    return out;
  }
  // Start scanning just after a regular node so that runs across the seam stay whole.
  int start = 0;
  while (flag[start]) ++start;
  const double h = pair.period() / N;
  int j = 0;
  while (j < N) {
    const int idx = (start + j) % N;
    if (!flag[idx]) {
      ++j;
      continue;
    }
    SingularInterval iv;
    iv.first_node = idx;
    while (j < N && flag[(start + j) % N]) {
      ++iv.count;
      ++j;
    }
    iv.start = iv.first_node * h;
    iv.length = iv.count * h;
    iv.center = wrap_periodic(iv.start + 0.5 * (iv.count - 1) * h, pair.period());
    out.push_back(iv);
  }
  return out;
}

double finite_difference_mismatch(const StringState& state) {
  const int n = state.size();
  const double h = state.spacing();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    Vec next = state.gamma.col((j + 1) % n);
    Vec prev = state.gamma.col((j + n - 1) % n);
    const Vec fd = (next - prev) / (2.0 * h);
    worst = std::max(worst, (fd - state.gamma_x.col(j)).norm());
  }
  return worst;
}

}  // namespace relstring
