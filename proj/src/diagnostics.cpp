#include "relstring/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relstring/errors.hpp"

namespace relstring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double squared_lagrangian(const Vec& xi, const Vec& eta) {
  const double d = xi.dot(eta);
  return d * d + eta.squaredNorm() * (1.0 - xi.squaredNorm());
}

// Per-node normal speed |gamma_t^perp|; NaN where the slice is not regular.
Vec normal_speed(const StringState& st, double regular) {
  Vec out(st.size());
  for (int j = 0; j < st.size(); ++j) {
    const Vec gx = st.gamma_x.col(j);
    const double s = gx.norm();
    out(j) = s < regular ? kNaN : normal_part(st.gamma_t.col(j), gx / s).norm();
  }
  return out;
}

void require_second_derivatives(const StringState& st) {
  if (!st.has_second_derivatives()) fail(ErrorCode::BadParams, "state carries no second derivatives");
}

// Nodewise |a - (1 - |v|^2) kappa|; NaN on non-regular nodes.
Vec geometric_defect(const StringState& st) {
  require_second_derivatives(st);
  const double regular = tolerances().slice_regular;
  Vec out(st.size());
  for (int j = 0; j < st.size(); ++j) {
    const Vec gx = st.gamma_x.col(j);
    const double s = gx.norm();
    if (s < regular) {
      out(j) = kNaN;
      continue;
    }
    const Vec tau = gx / s;
    const double vt = st.gamma_t.col(j).dot(tau);
    const Vec v = normal_part(st.gamma_t.col(j), tau);
    const Vec kappa = normal_part(st.gamma_xx.col(j), tau) / (s * s);
    const Vec a = normal_part(st.gamma_tt.col(j), tau) - 2.0 * vt / s * normal_part(st.gamma_tx.col(j), tau) +
                  vt * vt / (s * s) * normal_part(st.gamma_xx.col(j), tau);
    out(j) = (a - (1.0 - v.squaredNorm()) * kappa).norm();
  }
  return out;
}

double nan_max(const Vec& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isnan(v(i))) m = std::max(m, v(i));
  return m;
}

struct Composite {
  Vec ell;      // l(gamma_t, gamma_x)
  Vec energy;   // |gamma_x|^2 / l
  Vec flux;     // <gamma_t, gamma_x> / l
  Vec tension;  // (|gamma_t|^2 - 1) / l
};

// NaN marks nodes that are not regular or not strictly admissible.
Composite composite(const StringState& st) {
  const double regular = tolerances().slice_regular;
  Composite c;
  const int n = st.size();
  c.ell.resize(n);
  c.energy.resize(n);
  c.flux.resize(n);
  c.tension.resize(n);
  for (int j = 0; j < n; ++j) {
    const Vec gt = st.gamma_t.col(j);
    const Vec gx = st.gamma_x.col(j);
    const double l2 = squared_lagrangian(gt, gx);
    if (gx.norm() < regular || !(l2 > 0.0)) {
      c.ell(j) = c.energy(j) = c.flux(j) = c.tension(j) = kNaN;
      continue;
    }
    const double l = std::sqrt(l2);
    c.ell(j) = l;
    c.energy(j) = gx.squaredNorm() / l;
    c.flux(j) = gt.dot(gx) / l;
    c.tension(j) = (gt.squaredNorm() - 1.0) / l;
  }
  return c;
}

double periodic_dx(const Vec& f, int j, double h) {
  const auto n = static_cast<int>(f.size());
  return (f((j + 1) % n) - f((j + n - 1) % n)) / (2.0 * h);
}

struct ELFields {
  Vec scalar;
  Vec vector;
};

ELFields el_fields(const DAlembertPair& pair, double t, int N) {
  const double h = pair.period() / N;
  const double dt = 0.25 * h;
  const StringState st = evaluate_state(pair, t, N);
  const Composite c0 = composite(st);
  const Composite cm = composite(evaluate_state(pair, t - dt, N));
  const Composite cp = composite(evaluate_state(pair, t + dt, N));

  ELFields out;
  out.scalar.resize(N);
  out.vector.resize(N);
  for (int j = 0; j < N; ++j) {
    const double energy_t = (cp.energy(j) - cm.energy(j)) / (2.0 * dt);
    const double flux_t = (cp.flux(j) - cm.flux(j)) / (2.0 * dt);
    const double flux_x = periodic_dx(c0.flux, j, h);
    const double tension_x = periodic_dx(c0.tension, j, h);
    out.scalar(j) = std::abs(-energy_t + flux_x);

    const Vec gt = st.gamma_t.col(j);
    const Vec gx = st.gamma_x.col(j);
    const Vec principal = (gx.squaredNorm() * st.gamma_tt.col(j) + (gt.squaredNorm() - 1.0) * st.gamma_xx.col(j) -
                           2.0 * gt.dot(gx) * st.gamma_tx.col(j)) /
                          c0.ell(j);
    out.vector(j) = (principal + (tension_x - flux_t) * gx).norm();
  }
  return out;
}

}  // namespace

double lagrangian(const Vec& xi, const Vec& eta) {
  if (xi.size() != eta.size()) fail(ErrorCode::WrongDimension, "lagrangian arguments differ in dimension");
  const double l2 = squared_lagrangian(xi, eta);
  if (l2 < -tolerances().domain_slack)
    fail(ErrorCode::OutsideDomain, "space-like configuration (l^2 = " + std::to_string(l2) + ")");
  return std::sqrt(std::max(0.0, l2));
}

double minkowski_area(const DAlembertPair& pair, double t0, double t1, int N, int M) {
  if (t1 < t0) fail(ErrorCode::BadParams, "minkowski_area needs t0 <= t1");
  if (N < 1 || M < 1) fail(ErrorCode::BadParams, "minkowski_area needs positive grid sizes");
  if (t1 == t0) return 0.0;
  if (M % 2 != 0) ++M;
  const double dt = (t1 - t0) / M;
  double total = 0.0;
  for (int k = 0; k <= M; ++k) {
    const StringState st = evaluate_state(pair, t0 + k * dt, N);
    double slice = 0.0;
    for (int j = 0; j < N; ++j) slice += lagrangian(st.gamma_t.col(j), st.gamma_x.col(j));
    slice *= st.spacing();
    const double w = (k == 0 || k == M) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    total += w * slice;
  }
  return total * dt / 3.0;
}

double conserved_energy(const StringState& state) {
  const double degenerate = tolerances().degenerate_speed;
  double total = 0.0;
  for (int j = 0; j < state.size(); ++j) {
    const Vec gx = state.gamma_x.col(j);
    const double s = gx.norm();
    if (s < degenerate) continue;
    const double v2 = normal_part(state.gamma_t.col(j), gx / s).squaredNorm();
    if (v2 >= 1.0)
      fail(ErrorCode::NotStrictlyAdmissible, "|v| >= 1 at a regular node " + std::to_string(j));
    total += s / std::sqrt(1.0 - v2);
  }
  return total * state.spacing();
}

double image_energy(const StringState& state) {
  const int n = state.size();
  const Vec v = normal_speed(state, tolerances().degenerate_speed);
  Vec w(n);
  for (int j = 0; j < n; ++j) {
    if (!std::isnan(v(j)) && v(j) >= 1.0)
      fail(ErrorCode::NotStrictlyAdmissible, "|v| >= 1 at a regular node " + std::to_string(j));
    w(j) = std::isnan(v(j)) ? kNaN : 1.0 / std::sqrt(1.0 - v(j) * v(j));
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    const double chord = (state.gamma.col(k) - state.gamma.col(j)).norm();
    double weight = 0.0;
    if (!std::isnan(w(j)) && !std::isnan(w(k))) weight = 0.5 * (w(j) + w(k));
    else if (!std::isnan(w(j))) weight = w(j);
    else if (!std::isnan(w(k))) weight = w(k);
    total += chord * weight;
  }
  return total;
}

double area_density_integral(const StringState& state) {
  double total = 0.0;
  for (int j = 0; j < state.size(); ++j) total += lagrangian(state.gamma_t.col(j), state.gamma_x.col(j));
  return total * state.spacing();
}

ConstraintResiduals constraint_residuals(const StringState& state) {
  ConstraintResiduals r;
  for (int j = 0; j < state.size(); ++j) {
    const auto gt = state.gamma_t.col(j);
    const auto gx = state.gamma_x.col(j);
    r.orthogonality = std::max(r.orthogonality, std::abs(gt.dot(gx)));
    r.unit_norm = std::max(r.unit_norm, std::abs(gt.squaredNorm() + gx.squaredNorm() - 1.0));
  }
  return r;
}

GeometryFields geometry(const StringState& state) {
  require_second_derivatives(state);
  const double regular = tolerances().slice_regular;
  const int n = state.size();
  const int d = state.dimension();
  GeometryFields g{Points(d, n), Points(d, n), Points(d, n)};
  for (int j = 0; j < n; ++j) {
    const Vec gx = state.gamma_x.col(j);
    const double s = gx.norm();
    if (s < regular) fail(ErrorCode::NonRegularCurve, "|gamma_x| = " + std::to_string(s) + " at node " + std::to_string(j));
    const Vec tau = gx / s;
    const double vt = state.gamma_t.col(j).dot(tau);
    const Vec xx_perp = normal_part(state.gamma_xx.col(j), tau);
    g.kappa.col(j) = xx_perp / (s * s);
    g.v.col(j) = normal_part(state.gamma_t.col(j), tau);
    g.accel.col(j) = normal_part(state.gamma_tt.col(j), tau) - 2.0 * vt / s * normal_part(state.gamma_tx.col(j), tau) +
                     vt * vt / (s * s) * xx_perp;
  }
  return g;
}

double geometric_residual(const StringState& state) {
  const Vec defect = geometric_defect(state);
  if (defect.hasNaN()) fail(ErrorCode::NonRegularCurve, "slice has non-regular nodes");
  return defect.maxCoeff();
}

ELResidual el_residual(const DAlembertPair& pair, double t, int N) {
  const StringState st = evaluate_state(pair, t, N);
  const double lo = column_norms(st.gamma_x).minCoeff();
  if (lo < tolerances().slice_regular) fail(ErrorCode::NonRegularCurve, "|gamma_x| = " + std::to_string(lo));
  const ELFields f = el_fields(pair, t, N);
  if (f.scalar.hasNaN() || f.vector.hasNaN())
    fail(ErrorCode::NotStrictlyAdmissible, "slice is not strictly admissible near t = " + std::to_string(t));
  return ELResidual{f.scalar.maxCoeff(), f.vector.maxCoeff()};
}

PhiCheck phi_sectional_check(const StringState& state) {
  require_second_derivatives(state);
  const double regular = tolerances().slice_regular;
  PhiCheck out;
  out.phi.resize(state.size());
  for (int j = 0; j < state.size(); ++j) {
    const Vec gt = state.gamma_t.col(j);
    const Vec gx = state.gamma_x.col(j);
    if (gt.squaredNorm() >= 1.0)
      fail(ErrorCode::NotStrictlyAdmissible, "|gamma_t| >= 1 at node " + std::to_string(j));
    const double s = gx.norm();
    if (s < regular) fail(ErrorCode::NonRegularCurve, "|gamma_x| = " + std::to_string(s) + " at node " + std::to_string(j));
    const double phi = s / std::sqrt(1.0 - gt.squaredNorm());
    out.phi(j) = phi;
    const Vec tau = gx / s;
    const Vec a = normal_part(state.gamma_tt.col(j), tau);
    const Vec v = normal_part(gt, tau);
    const Vec k = (1.0 - v.squaredNorm()) * normal_part(state.gamma_xx.col(j), tau) / (s * s);
    const double factor = (1.0 - phi * phi) / (1.0 + phi * phi);
    out.residual = std::max(out.residual, (-a + k - factor * (a + k)).norm());
  }
  return out;
}

std::array<double, 9> DiagnosticsReport::values() const {
  return {t,
          conserved_energy,
          area_density_integral,
          max_orthogonality_residual,
          max_unitnorm_residual,
          max_el_residual,
          max_geometric_residual,
          min_speed,
          max_normal_velocity};
}

DiagnosticsReport diagnose(const DAlembertPair& pair, double t, int N) {
  const StringState st = evaluate_state(pair, t, N);
  DiagnosticsReport r;
  r.t = t;
  r.conserved_energy = relstring::conserved_energy(st);
  r.area_density_integral = relstring::area_density_integral(st);
  const ConstraintResiduals c = constraint_residuals(st);
  r.max_orthogonality_residual = c.orthogonality;
  r.max_unitnorm_residual = c.unit_norm;
  r.max_geometric_residual = nan_max(geometric_defect(st));
  const ELFields f = el_fields(pair, t, N);
  r.max_el_residual = std::max(nan_max(f.scalar), nan_max(f.vector));
  r.min_speed = column_norms(st.gamma_x).minCoeff();
  r.max_normal_velocity = nan_max(normal_speed(st, tolerances().slice_regular));
  return r;
}

}  // namespace relstring
