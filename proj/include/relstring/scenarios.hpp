#ifndef RELSTRING_SCENARIOS_HPP
#define RELSTRING_SCENARIOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relstring/dalembert.hpp"
#include "relstring/wiggly.hpp"

namespace relstring {

DAlembertPair circle(double R);

/// Unit circle of radius 1 as a unit-speed analytic loop (period 2 pi).
PeriodicLoop unit_circle_loop();

/// a(s) = 2 A(s/2), b(s) = eps A(s/eps) with period 2L; BadEps unless
/// eps in (0, 1) and 2/eps is an integer.
DAlembertPair cylinder(const PeriodicLoop& A, double eps);

/// Limit of the cylinder family, gamma(t, x) = A((x + t)/2).
Vec cylinder_limit(const PeriodicLoop& A, double t, double x);

/// (1/2pi) int_0^{2pi} sqrt(5/4 + cos s) ds.
double neu_alpha();

struct PairWithLimit {
  DAlembertPair pair;
  DAlembertPair limit;
};

/// Oscillating unit-speed pairs (a_n, b_n) and their SubUnit limit
/// (alpha a(s/alpha), a(s/alpha)), all with period 2 pi alpha.
PairWithLimit neu(int n);

/// Three-dimensional oscillating family around a = e_theta (shifted by 2 phi);
/// the limit is (a, alpha e_theta).
PairWithLimit helical3d(double alpha, double beta, int n, double phi = 0.0);

/// Boundary of [-L/2, L/2]^2 traversed counter-clockwise from (-L/2, -L/2),
/// exact piecewise-linear, a = b, period 4L.
DAlembertPair square(double L);
PiecewiseLinearLoop square_loop(double L);

/// Arc-length resampling of a planar uniformly convex curve with a = b.
DAlembertPair convex_zero_velocity(const PeriodicLoop& curve, int N);

/// Planar analytic test curves on [0, 2 pi).
PeriodicLoop ellipse_loop(double semi_a, double semi_b);
PeriodicLoop symmetric_oval_loop(double eps);  // (cos s + eps cos 3s, sin s - eps sin 3s)
PeriodicLoop egg_loop(double eps);             // (cos s + eps cos 2s, sin s + eps sin 2s)

/// Back-and-forth polygon c = (1/2, 0) on [0, 1], (-1/2, 0) on [1, 2].
PiecewiseLinearLoop flat_loop();

struct ScenarioSpec {
  std::string name;
  int dimension = 2;
  std::string summary;
  std::map<std::string, double> parameters;  // defaults, overridden on build
  std::map<std::string, double> expected;
};

struct Scenario {
  ScenarioSpec spec;
  DAlembertPair pair;
  std::optional<DAlembertPair> limit;
};

/// Registered scenarios with their default parameters.
const std::vector<ScenarioSpec>& scenario_registry();

/// Builds a registered scenario; unknown names or parameters give BadParams.
Scenario build_scenario(const std::string& name, const std::map<std::string, double>& overrides = {});

}  // namespace relstring

#endif  // RELSTRING_SCENARIOS_HPP
