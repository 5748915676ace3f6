#ifndef RELSTRING_DIAGNOSTICS_HPP
#define RELSTRING_DIAGNOSTICS_HPP

#include <array>
#include <string_view>

#include "relstring/dalembert.hpp"

namespace relstring {

/// Area integrand sqrt(<xi, eta>^2 + |eta|^2 (1 - |xi|^2)); OutsideDomain on
/// space-like arguments (beyond the configured slack).
double lagrangian(const Vec& xi, const Vec& eta);

/// Minkowski area of the evolved map over [t0, t1] x [0, E]: Simpson in time
/// (M intervals, rounded up to even) and trapezoid in space (N nodes).
double minkowski_area(const DAlembertPair& pair, double t0, double t1, int N, int M);

/// int_0^E |gamma_x| / sqrt(1 - |gamma_t^perp|^2) dx, with the integrand set to
/// 0 on nodes where |gamma_x| is below the degenerate threshold.
double conserved_energy(const StringState& state);

/// Same energy written on the image: sum over chords of the slice of
/// length / sqrt(1 - |v|^2), assuming an embedded slice. Chords with both
/// end nodes degenerate contribute 0.
double image_energy(const StringState& state);

/// int_0^E l(gamma_t, gamma_x) dx on one slice.
double area_density_integral(const StringState& state);

struct ConstraintResiduals {
  double orthogonality = 0.0;  // max |<gamma_t, gamma_x>|
  double unit_norm = 0.0;      // max | |gamma_t|^2 + |gamma_x|^2 - 1 |
};
ConstraintResiduals constraint_residuals(const StringState& state);

/// Per-node curvature vector, normal velocity and normal acceleration.
struct GeometryFields {
  Points kappa;
  Points v;
  Points accel;
};

GeometryFields geometry(const StringState& state);

/// max_x |a - (1 - |v|^2) kappa|.
double geometric_residual(const StringState& state);

struct ELResidual {
  double scalar = 0.0;  // conservation equation
  double vector = 0.0;  // Euler-Lagrange system
};

/// Pointwise Euler-Lagrange residuals at time t; composite quantities are
/// differentiated by central differences with h = E/N and dt = h/4.
ELResidual el_residual(const DAlembertPair& pair, double t, int N);

struct PhiCheck {
  Vec phi;
  double residual = 0.0;
};

/// phi = |gamma_x| / sqrt(1 - |gamma_t|^2) and the residual of
/// -a + (1-|v|^2) kappa = (1-phi^2)/(1+phi^2) (a + (1-|v|^2) kappa), a = gamma_tt^perp.
PhiCheck phi_sectional_check(const StringState& state);

struct DiagnosticsReport {
  double t = 0.0;
  double conserved_energy = 0.0;
  double area_density_integral = 0.0;
  double max_orthogonality_residual = 0.0;
  double max_unitnorm_residual = 0.0;
  double max_el_residual = 0.0;
  double max_geometric_residual = 0.0;
  double min_speed = 0.0;
  double max_normal_velocity = 0.0;

  static constexpr std::array<std::string_view, 9> kColumns = {
      "t", "conserved_energy", "area_density_integral", "max_orthogonality_residual",
      "max_unitnorm_residual", "max_el_residual", "max_geometric_residual", "min_speed",
      "max_normal_velocity"};
  std::array<double, 9> values() const;
};

/// All per-slice scalars. Residuals that need a regular, strictly admissible
/// slice are evaluated on the nodes where that holds (0 if there are none).
DiagnosticsReport diagnose(const DAlembertPair& pair, double t, int N);

}  // namespace relstring

#endif  // RELSTRING_DIAGNOSTICS_HPP
