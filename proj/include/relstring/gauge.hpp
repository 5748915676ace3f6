#ifndef RELSTRING_GAUGE_HPP
#define RELSTRING_GAUGE_HPP

#include <vector>

#include "relstring/periodic_loop.hpp"
#include "relstring/string_state.hpp"

namespace relstring {

struct GaugeReport {
  double energy_parameter = 0.0;  // E, the rho-weighted length
  double max_orthogonality_residual = 0.0;
  double max_norm_residual = 0.0;
};

struct ConformalData {
  PeriodicLoop curve;
  VelocityField velocity;
  GaugeReport report;
};

/// Reparametrizes (curve, v0) on [0, E] so that |gamma_x|^2 + |gamma_t|^2 = 1
/// at t = 0. v0 must already be normal to the curve and strictly sub-luminal.
ConformalData conformal_normalize(const PeriodicLoop& curve, const VelocityField& velocity, int N);

/// r(t_k, x_j): row k is the reparametrization at time states[k].t.
struct GaugeMap {
  Vec times;
  Vec grid;
  Eigen::MatrixXd r;
};

/// Orthogonalizing reparametrization of a time-indexed family of slices
/// sharing one uniform grid of N nodes: each node follows
/// dr/dt = -<gamma_t, gamma_x> / |gamma_x|^2 evaluated at (t, r).
GaugeMap orthogonal_gauge(const std::vector<StringState>& states, int N);

/// Max |<Gamma_t, Gamma_x>| of the recomposed map Gamma(t, x) = gamma(t, r(t, x)),
/// with r_t taken from second-order finite differences of the map.
double recomposed_orthogonality(const std::vector<StringState>& states, const GaugeMap& map);

/// rho(x) = |gamma_x| / sqrt(1 - |gamma_t|^2) at every node.
Vec rho_profile(const StringState& state);

}  // namespace relstring

#endif  // RELSTRING_GAUGE_HPP
