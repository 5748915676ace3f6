#include "relstring/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relstring/curve.hpp"
#include "relstring/errors.hpp"
#include "relstring/periodic_spline.hpp"
#include "relstring/tolerances.hpp"

namespace relstring {

namespace {

Vec transport_coefficient(const StringState& st) {
  const Vec dots = column_dots(st.gamma_t, st.gamma_x);
  const Vec speed2 = st.gamma_x.colwise().squaredNorm().transpose();
  return dots.cwiseQuotient(speed2);
}

PeriodicCubicSpline scalar_spline(const Vec& values, double period) {
  return PeriodicCubicSpline(values.transpose(), period);
}

}  // namespace

ConformalData conformal_normalize(const PeriodicLoop& curve, const VelocityField& velocity, int N) {
  if (curve.dimension() != velocity.dimension()) fail(ErrorCode::WrongDimension, "velocity dimension mismatch");
  if (std::abs(curve.period() - velocity.period()) > 1e-12 * curve.period())
    fail(ErrorCode::InvalidLoop, "velocity period differs from curve period");
  if (N < 8) fail(ErrorCode::TooFewSamples, "conformal_normalize needs N >= 8");
  const auto& tol = tolerances();

  // Precondition scan on the same fine grid the reparametrization integrates over.
  const int probes = 4 * N;
  const double ds = curve.period() / probes;
  for (int i = 0; i < probes; ++i) {
    const double s = i * ds;
    const Vec d1 = curve.derivative(s);
    const Vec v = velocity(s);
    const double speed = d1.norm();
    if (speed < tol.regular_speed) fail(ErrorCode::NonRegularCurve, "|curve'| = " + std::to_string(speed));
    if (v.norm() >= 1.0 - tol.admissible_margin)
      fail(ErrorCode::NotStrictlyAdmissible, "|v0| = " + std::to_string(v.norm()) + " at s = " + std::to_string(s));
  }

  // Normal form is checked where the data lives: sample nodes for sampled
  // input, the probe grid otherwise.
  const Points* nodes = curve.samples();
  const Eigen::Index checks = nodes ? nodes->cols() : probes;
  for (Eigen::Index i = 0; i < checks; ++i) {
    const double s = curve.period() * static_cast<double>(i) / static_cast<double>(checks);
    const Vec d1 = curve.derivative(s);
    if (std::abs(velocity(s).dot(d1)) > tol.normal_velocity * d1.norm())
      fail(ErrorCode::NotNormalized, "velocity has a tangential component at s = " + std::to_string(s));
  }

  // The interpolated velocity is projected onto the normal space, which
  // removes the tangential residue left by resampling.
  auto normal_velocity = [&](double s, const Jet& c) {
    const Vec v = velocity(s);
    const Vec tau = c.d1.normalized();
    return Vec(v - v.dot(tau) * tau);
  };
  const WeightedSamples ws = weighted_reparametrize(
      curve, [&](double s, const Jet& c) { return 1.0 / std::sqrt(1.0 - normal_velocity(s, c).squaredNorm()); }, N);
  const double E = ws.total;

  // Node derivatives in the new parameter u, du/ds = w(s) |curve'(s)|.
  const int n = curve.dimension();
  Points pos(n, N), pos1(n, N), pos2(n, N);
  Points vel(n, N), vel1(n, N), vel2(n, N);
  for (int j = 0; j < N; ++j) {
    const Jet c = curve.jet(ws.params(j));
    const Jet raw = velocity.field().jet(ws.params(j));
    const double sp = c.d1.norm();
    const Vec tau = c.d1 / sp;
    const Vec dtau = (c.d2 - c.d2.dot(tau) * tau) / sp;
    const double vt = raw.value.dot(tau);
    const Vec v = raw.value - vt * tau;
    const Vec dv = raw.d1 - (raw.d1.dot(tau) + raw.value.dot(dtau)) * tau - vt * dtau;
    const double w = 1.0 / std::sqrt(1.0 - v.squaredNorm());
    const double dw = w * w * w * v.dot(dv);
    const double D = w * sp;
    const double dD = dw * sp + w * c.d1.dot(c.d2) / sp;
    pos.col(j) = c.value;
    pos1.col(j) = c.d1 / D;
    pos2.col(j) = (c.d2 / D - c.d1 * (dD / (D * D))) / D;
    vel.col(j) = v;
    vel1.col(j) = dv / D;
    // Terms needing the third curve derivative are dropped.
    const double dvt = raw.d1.dot(tau) + raw.value.dot(dtau);
    const Vec ddv = raw.d2 - (raw.d2.dot(tau) + 2.0 * raw.d1.dot(dtau)) * tau - 2.0 * dvt * dtau;
    vel2.col(j) = (ddv / D - dv * (dD / (D * D))) / D;
  }
  PeriodicLoop new_curve = PeriodicLoop::sampled_hermite(pos, pos1, pos2, E);
  VelocityField new_velocity = velocity.is_zero() ? VelocityField::zero(E, n)
                                                  : VelocityField(PeriodicLoop::sampled_hermite(vel, vel1, vel2, E));

  GaugeReport report;
  report.energy_parameter = E;
  const double h = E / N;
  for (int j = 0; j < N; ++j) {
    const Vec gx = new_curve.derivative(j * h);
    const Vec v = vel.col(j);
    report.max_orthogonality_residual = std::max(report.max_orthogonality_residual, std::abs(gx.dot(v)));
    report.max_norm_residual =
        std::max(report.max_norm_residual, std::abs(gx.squaredNorm() + v.squaredNorm() - 1.0));
  }
  return ConformalData{std::move(new_curve), std::move(new_velocity), report};
}

GaugeMap orthogonal_gauge(const std::vector<StringState>& states, int N) {
  if (states.empty()) fail(ErrorCode::BadParams, "orthogonal_gauge needs at least one slice");
  const double E = states.front().period;
  for (const StringState& st : states) {
    if (st.size() != N) fail(ErrorCode::BadParams, "all slices must share the N-node grid");
    const double lo = column_norms(st.gamma_x).minCoeff();
    if (lo < 1e-10)
      fail(ErrorCode::NonRegularCurve, "slice at t = " + std::to_string(st.t) + " has |gamma_x| = " + std::to_string(lo));
  }
  const auto K = static_cast<Eigen::Index>(states.size());

  GaugeMap map;
  map.grid = states.front().grid;
  map.times.resize(K);
  map.r.resize(K, N);
  map.r.row(0) = map.grid.transpose();
  map.times(0) = states.front().t;

  std::vector<PeriodicCubicSpline> coeff;
  coeff.reserve(states.size());
  for (const StringState& st : states) coeff.push_back(scalar_spline(transport_coefficient(st), E));

  for (Eigen::Index k = 0; k + 1 < K; ++k) {
    const double t0 = states[k].t;
    const double dt = states[k + 1].t - t0;
    if (!(dt > 0.0)) fail(ErrorCode::BadParams, "slice times must be strictly increasing");
    map.times(k + 1) = states[k + 1].t;
    const auto& c0 = coeff[k];
    const auto& c1 = coeff[k + 1];
    // Coefficient at the half step is the average of the bracketing slices.
    auto rhs = [&](double frac, double x) {
      const double a = c0.eval(x).value(0);
      const double b = c1.eval(x).value(0);
      return -((1.0 - frac) * a + frac * b);
    };
    for (int j = 0; j < N; ++j) {
      const double r = map.r(k, j);
      const double k1 = rhs(0.0, r);
      const double k2 = rhs(0.5, r + 0.5 * dt * k1);
      const double k3 = rhs(0.5, r + 0.5 * dt * k2);
      const double k4 = rhs(1.0, r + dt * k3);
      map.r(k + 1, j) = r + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
    for (int j = 0; j < N; ++j) {
      const double next = (j + 1 < N) ? map.r(k + 1, j + 1) : map.r(k + 1, 0) + E;
      if (!(next > map.r(k + 1, j)))
        fail(ErrorCode::MonotonicityLost, "r(t, .) stopped increasing at t = " + std::to_string(states[k + 1].t));
    }
  }
  return map;
}

double recomposed_orthogonality(const std::vector<StringState>& states, const GaugeMap& map) {
  const auto K = static_cast<Eigen::Index>(states.size());
  const int N = static_cast<int>(map.grid.size());
  const double E = states.front().period;
  const double h = E / N;
  const int n = states.front().dimension();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    const StringState& st = states[k];
    Points stacked(2 * n, N);
    stacked.topRows(n) = st.gamma_t;
    stacked.bottomRows(n) = st.gamma_x;
    const PeriodicCubicSpline fields(stacked, E);
    for (int j = 0; j < N; ++j) {
      double r_t = 0.0;
      if (K >= 3) {
        if (k == 0) {
          r_t = (-3.0 * map.r(0, j) + 4.0 * map.r(1, j) - map.r(2, j)) / (map.times(2) - map.times(0));
        } else if (k == K - 1) {
          r_t = (3.0 * map.r(k, j) - 4.0 * map.r(k - 1, j) + map.r(k - 2, j)) / (map.times(k) - map.times(k - 2));
        } else {
          r_t = (map.r(k + 1, j) - map.r(k - 1, j)) / (map.times(k + 1) - map.times(k - 1));
        }
      } else if (K == 2) {
        r_t = (map.r(1, j) - map.r(0, j)) / (map.times(1) - map.times(0));
      }
      const double up = (j + 1 < N) ? map.r(k, j + 1) : map.r(k, 0) + E;
      const double down = (j > 0) ? map.r(k, j - 1) : map.r(k, N - 1) - E;
      const double r_x = (up - down) / (2.0 * h);
      const auto e = fields.eval(map.r(k, j)).value;
      const Vec gt = e.head(n);
      const Vec gx = e.tail(n);
      worst = std::max(worst, std::abs((gt + r_t * gx).dot(gx)) * r_x);
    }
  }
  return worst;
}

Vec rho_profile(const StringState& state) {
  Vec rho(state.size());
  for (int j = 0; j < state.size(); ++j) {
    const double vt2 = state.gamma_t.col(j).squaredNorm();
    if (vt2 >= 1.0)
      fail(ErrorCode::NotStrictlyAdmissible, "|gamma_t| >= 1 at node " + std::to_string(j));
    rho(j) = state.gamma_x.col(j).norm() / std::sqrt(1.0 - vt2);
  }
  return rho;
}

}  // namespace relstring
