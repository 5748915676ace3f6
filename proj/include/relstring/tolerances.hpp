#ifndef RELSTRING_TOLERANCES_HPP
#define RELSTRING_TOLERANCES_HPP

#include <map>
#include <string>

namespace relstring {

// Global numerical thresholds. The CLI can override any of them by name and
// echoes the effective values into manifest.json.
struct ToleranceConfig {
  double regular_speed = 1e-12;       // min |curve'| before NonRegularCurve
  double slice_regular = 1e-10;       // min |gamma_x| for geometry / gauge
  double admissible_margin = 1e-10;   // |v| must stay below 1 - margin
  double normal_velocity = 1e-8;      // |<v0, curve'>| for normal-form input
  double normalization = 1e-8;        // | |curve'|^2 + |v0|^2 - 1 |
  double zero_mean = 1e-10;           // |int v0| <= zero_mean * E
  double unit_speed = 1e-8;           // UnitSpeed pair invariant
  double sub_unit = 1e-10;            // SubUnit pair invariant slack
  double collapse = 1e-6;             // detect_collapse tol, relative to E
  double singular = 1e-6;             // singular_set threshold on |gamma_x|
  double degenerate_speed = 1e-12;    // energy integrand set to 0 below this
  double domain_slack = 1e-12;        // lagrangian domain slack
  double inclusion_slack = 1e-10;     // boundary slack, relative to E

  std::map<std::string, double> as_map() const;
  // Returns false if the name is unknown.
  bool set(const std::string& name, double value);
};

// Active configuration used by every module. Set once at startup (the CLI
// applies --tol overrides here) before any computation runs.
const ToleranceConfig& tolerances();
void set_tolerances(const ToleranceConfig& cfg);

}  // namespace relstring

#endif  // RELSTRING_TOLERANCES_HPP
