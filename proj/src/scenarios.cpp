#include "relstring/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "relstring/convexity2d.hpp"
#include "relstring/curve.hpp"
#include "relstring/errors.hpp"
#include "relstring/quadrature.hpp"

namespace relstring {

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

double neu_integrand(double u) { return std::sqrt(1.25 + std::cos(u)); }

// F(u) = int_0^u sqrt(5/4 + cos) on a cumulative Gauss table, extended by
// F(u + 2 pi) = F(u) + F(2 pi).
class NeuPrimitive {
 public:
  NeuPrimitive() : cum_(kCells + 1, 0.0) {
    const double h = 2.0 * kPi / kCells;
    for (int i = 0; i < kCells; ++i)
      cum_[i + 1] = cum_[i] + quad::gauss_legendre(neu_integrand, i * h, (i + 1) * h);
  }

  double turn() const { return cum_.back(); }

  double operator()(double u) const {
    const double h = 2.0 * kPi / kCells;
    const double laps = std::floor(u / (2.0 * kPi));
    const double r = u - laps * 2.0 * kPi;
    const int i = std::clamp(static_cast<int>(r / h), 0, kCells - 1);
    return laps * turn() + cum_[i] + quad::gauss_legendre(neu_integrand, i * h, r);
  }

 private:
  static constexpr int kCells = 512;
  std::vector<double> cum_;
};

const NeuPrimitive& neu_primitive() {
  static const NeuPrimitive F;
  return F;
}

Jet circle_jet(double R, double s) {
  const double c = std::cos(s / R);
  const double sn = std::sin(s / R);
  return Jet{R * vec2(c, sn), vec2(-sn, c), vec2(-c, -sn) / R};
}

std::map<std::string, double> merged(const ScenarioSpec& spec, const std::map<std::string, double>& overrides) {
  std::map<std::string, double> out = spec.parameters;
  for (const auto& [key, value] : overrides) {
    if (!out.count(key)) fail(ErrorCode::BadParams, "scenario '" + spec.name + "' has no parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

int as_int(double v, const std::string& name) {
  if (v != std::floor(v)) fail(ErrorCode::BadParams, "parameter '" + name + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

PeriodicLoop unit_circle_loop() {
  return PeriodicLoop::analytic(2.0 * kPi, 2, [](double s) { return circle_jet(1.0, s); });
}

DAlembertPair circle(double R) {
  if (!(R > 0.0)) fail(ErrorCode::BadParams, "circle radius must be positive");
  const PeriodicLoop a = PeriodicLoop::analytic(2.0 * kPi * R, 2, [R](double s) { return circle_jet(R, s); });
  return DAlembertPair(a, a, ConstraintMode::UnitSpeed);
}

DAlembertPair cylinder(const PeriodicLoop& A, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::BadEps, "eps must lie in (0, 1)");
  const double ratio = 2.0 / eps;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    fail(ErrorCode::BadEps, "2/eps must be an integer for b to close up on period 2L");
  const double L = A.period();
  PeriodicLoop a = PeriodicLoop::analytic(2.0 * L, A.dimension(), [A](double s) {
    const Jet j = A.jet(0.5 * s);
    return Jet{2.0 * j.value, j.d1, 0.5 * j.d2};
  });
  PeriodicLoop b = PeriodicLoop::analytic(2.0 * L, A.dimension(), [A, eps](double s) {
    const Jet j = A.jet(s / eps);
    return Jet{eps * j.value, j.d1, j.d2 / eps};
  });
  return DAlembertPair(std::move(a), std::move(b), ConstraintMode::UnitSpeed);
}

Vec cylinder_limit(const PeriodicLoop& A, double t, double x) { return A(0.5 * (x + t)); }

double neu_alpha() {
  return quad::adaptive_gauss_kronrod(neu_integrand, 0.0, 2.0 * kPi, 1e-14) / (2.0 * kPi);
}

PairWithLimit neu(int n) {
  if (n < 2) fail(ErrorCode::BadParams, "neu needs n >= 2");
  const NeuPrimitive& F = neu_primitive();
  const double alpha = F.turn() / (2.0 * kPi);
  const double period = 2.0 * kPi * alpha;
  const double m = n - 1.0;

  PeriodicLoop a = PeriodicLoop::analytic(period, 2, [alpha](double s) { return circle_jet(alpha, s); });
  PeriodicLoop b = PeriodicLoop::analytic(period, 2, [&F, alpha, m, n](double s) {
    // Invert s_n(x) = F(m x) / m with a safeguarded Newton iteration.
    double lo = 0.0;
    double hi = 2.0 * kPi;
    double x = s / alpha;
    for (int it = 0; it < 60; ++it) {
      const double f = F(m * x) / m - s;
      if (f > 0.0) hi = x; else lo = x;
      if (std::abs(f) <= 1e-15 * (1.0 + s)) break;
      double next = x - f / neu_integrand(m * x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      x = next;
    }
    const double root = neu_integrand(m * x);
    const double xp = 1.0 / root;
    const double s2 = -m * std::sin(m * x) / (2.0 * root);
    const double xpp = -s2 * xp * xp * xp;
    const Jet j1 = circle_jet(1.0, x);
    const Jet jn = circle_jet(1.0, n * x);
    const Vec velocity = j1.d1 + 0.5 * jn.d1;
    const Vec accel = j1.d2 + 0.5 * n * jn.d2;
    return Jet{j1.value + jn.value / (2.0 * n), xp * velocity, xpp * velocity + xp * xp * accel};
  });
  PeriodicLoop b_lim = PeriodicLoop::analytic(period, 2, [alpha](double s) {
    const Jet j = circle_jet(1.0, s / alpha);
    return Jet{j.value, j.d1 / alpha, j.d2 / (alpha * alpha)};
  });
  return PairWithLimit{DAlembertPair(a, std::move(b), ConstraintMode::UnitSpeed),
                       DAlembertPair(a, std::move(b_lim), ConstraintMode::SubUnit)};
}

PairWithLimit helical3d(double alpha, double beta, int n, double phi) {
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12 || !(std::abs(alpha) < 1.0) || !(std::abs(beta) < 1.0))
    fail(ErrorCode::BadParams, "helical3d needs alpha^2 + beta^2 = 1 with alpha, beta in (-1, 1)");
  if (n < 2) fail(ErrorCode::BadParams, "helical3d needs n >= 2");
  const double period = 2.0 * kPi;
  PeriodicLoop a = PeriodicLoop::analytic(period, 3, [phi](double th) {
    const double c = std::cos(th + 2.0 * phi);
    const double s = std::sin(th + 2.0 * phi);
    return Jet{vec3(-s, c, 0.0), vec3(-c, -s, 0.0), vec3(s, -c, 0.0)};
  });
  PeriodicLoop b = PeriodicLoop::analytic(period, 3, [alpha, beta, n](double th) {
    const Vec er = vec3(std::cos(th), std::sin(th), 0.0);
    const Vec et = vec3(-std::sin(th), std::cos(th), 0.0);
    const Vec ez = vec3(0.0, 0.0, 1.0);
    const double nn = n;
    const double q = nn * nn - 1.0;
    const double sn = std::sin(nn * th);
    const double cn = std::cos(nn * th);
    Jet j;
    j.value = alpha * et + beta * (et * sn * nn / q - er * cn / q + ez * cn / nn);
    j.d1 = -alpha * er + beta * (et * cn - ez * sn);
    j.d2 = -alpha * et + beta * (-er * cn - et * nn * sn - ez * nn * cn);
    return j;
  });
  PeriodicLoop b_lim = PeriodicLoop::analytic(period, 3, [alpha](double th) {
    const Vec er = vec3(std::cos(th), std::sin(th), 0.0);
    const Vec et = vec3(-std::sin(th), std::cos(th), 0.0);
    return Jet{alpha * et, -alpha * er, -alpha * et};
  });
  return PairWithLimit{DAlembertPair(a, std::move(b), ConstraintMode::UnitSpeed),
                       DAlembertPair(a, std::move(b_lim), ConstraintMode::SubUnit)};
}

PiecewiseLinearLoop square_loop(double L) {
  if (!(L > 0.0)) fail(ErrorCode::BadParams, "square side must be positive");
  Points slopes(2, 4);
  slopes << 1.0, 0.0, -1.0, 0.0,
            0.0, 1.0, 0.0, -1.0;
  return PiecewiseLinearLoop({0.0, L, 2.0 * L, 3.0 * L, 4.0 * L}, slopes, vec2(-0.5 * L, -0.5 * L));
}

DAlembertPair square(double L) {
  const PiecewiseLinearLoop q = square_loop(L);
  return DAlembertPair(q.loop(), q.loop(), ConstraintMode::UnitSpeed);
}

DAlembertPair convex_zero_velocity(const PeriodicLoop& curve, int N) {
  if (curve.dimension() != 2) fail(ErrorCode::WrongDimension, "convex_zero_velocity is planar");
  const PeriodicLoop a = arclength_reparametrize(curve, N);
  DAlembertPair pair(a, a, ConstraintMode::UnitSpeed);
  const ConvexityResult conv = is_uniformly_convex(evaluate_state(pair, 0.0, N));
  if (!conv.uniformly_convex)
    fail(ErrorCode::NotConvex, "curve is not uniformly convex (margin " + std::to_string(conv.margin) + ")");
  return pair;
}

PeriodicLoop ellipse_loop(double semi_a, double semi_b) {
  if (!(semi_a > 0.0 && semi_b > 0.0)) fail(ErrorCode::BadParams, "ellipse semi-axes must be positive");
  return PeriodicLoop::analytic(2.0 * kPi, 2, [semi_a, semi_b](double s) {
    const double c = std::cos(s);
    const double sn = std::sin(s);
    return Jet{vec2(semi_a * c, semi_b * sn), vec2(-semi_a * sn, semi_b * c), vec2(-semi_a * c, -semi_b * sn)};
  });
}

PeriodicLoop symmetric_oval_loop(double eps) {
  return PeriodicLoop::analytic(2.0 * kPi, 2, [eps](double s) {
    const double c1 = std::cos(s), s1 = std::sin(s), c3 = std::cos(3.0 * s), s3 = std::sin(3.0 * s);
    return Jet{vec2(c1 + eps * c3, s1 - eps * s3), vec2(-s1 - 3.0 * eps * s3, c1 - 3.0 * eps * c3),
               vec2(-c1 - 9.0 * eps * c3, -s1 + 9.0 * eps * s3)};
  });
}

PeriodicLoop egg_loop(double eps) {
  return PeriodicLoop::analytic(2.0 * kPi, 2, [eps](double s) {
    const double c1 = std::cos(s), s1 = std::sin(s), c2 = std::cos(2.0 * s), s2 = std::sin(2.0 * s);
    return Jet{vec2(c1 + eps * c2, s1 + eps * s2), vec2(-s1 - 2.0 * eps * s2, c1 + 2.0 * eps * c2),
               vec2(-c1 - 4.0 * eps * c2, -s1 - 4.0 * eps * s2)};
  });
}

PiecewiseLinearLoop flat_loop() {
  Points slopes(2, 2);
  slopes << 0.5, -0.5,
            0.0, 0.0;
  return PiecewiseLinearLoop({0.0, 1.0, 2.0}, slopes, vec2(0.0, 0.0));
}

const std::vector<ScenarioSpec>& scenario_registry() {
  static const std::vector<ScenarioSpec> registry = {
      {"circle", 2, "round circle of radius R, collapses at t = E/4", {{"R", 1.0}}, {}},
      {"ellipse", 2, "ellipse with semi-axes (a, b), zero velocity, N spline nodes", {{"a", 2.0}, {"b", 1.0}, {"N", 1024}}, {}},
      {"oval", 2, "centrally symmetric oval (cos s + eps cos 3s, sin s - eps sin 3s)", {{"eps", 0.1}, {"N", 1024}}, {}},
      {"egg", 2, "non-symmetric convex egg (cos s + eps cos 2s, sin s + eps sin 2s)", {{"eps", 0.1}, {"N", 1024}}, {}},
      {"cylinder", 2, "a = 2A(s/2), b = eps A(s/eps) with A the unit circle", {{"eps", 0.125}}, {}},
      {"neu", 2, "oscillating unit-speed pair (a_n, b_n)", {{"n", 5}}, {}},
      {"neu_limit", 2, "sub-unit limit of the neu family", {}, {}},
      {"helical3d", 3, "three-dimensional oscillating pair (a, b_n)", {{"alpha", 0.6}, {"beta", 0.8}, {"n", 7}, {"phi", 0.0}}, {}},
      {"helical3d_limit", 3, "sub-unit limit (a, alpha e_theta) of helical3d", {{"alpha", 0.6}, {"beta", 0.8}, {"phi", 0.0}}, {}},
      {"square", 2, "boundary of the square of side L, exact polygon", {{"L", 1.0}}, {}},
  };
  return registry;
}

Scenario build_scenario(const std::string& name, const std::map<std::string, double>& overrides) {
  const auto& reg = scenario_registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const ScenarioSpec& s) { return s.name == name; });
  if (it == reg.end()) fail(ErrorCode::BadParams, "unknown scenario '" + name + "'");
  ScenarioSpec spec = *it;
  spec.parameters = merged(spec, overrides);
  const auto& p = spec.parameters;
  auto& expected = spec.expected;

  if (name == "circle") {
    const double R = p.at("R");
    DAlembertPair pair = circle(R);
    expected["period"] = pair.period();
    expected["collapse_time"] = 0.25 * pair.period();
    expected["conserved_energy"] = pair.period();
    return Scenario{spec, std::move(pair), std::nullopt};
  }
  if (name == "ellipse" || name == "oval" || name == "egg") {
    const int N = as_int(p.at("N"), "N");
    const PeriodicLoop curve = name == "ellipse" ? ellipse_loop(p.at("a"), p.at("b"))
                               : name == "oval"  ? symmetric_oval_loop(p.at("eps"))
                                                 : egg_loop(p.at("eps"));
    DAlembertPair pair = convex_zero_velocity(curve, N);
    expected["period"] = pair.period();
    expected["conserved_energy"] = pair.period();
    if (name == "oval") expected["collapse_time"] = 0.25 * pair.period();
    return Scenario{spec, std::move(pair), std::nullopt};
  }
  if (name == "cylinder") {
    DAlembertPair pair = cylinder(unit_circle_loop(), p.at("eps"));
    expected["period"] = pair.period();
    expected["conserved_energy"] = pair.period();
    expected["limit_sup_bound"] = p.at("eps");
    return Scenario{spec, std::move(pair), std::nullopt};
  }
  if (name == "neu" || name == "neu_limit") {
    PairWithLimit both = neu(name == "neu" ? as_int(p.at("n"), "n") : 2);
    const double alpha = neu_alpha();
    expected["alpha"] = alpha;
    expected["period"] = 2.0 * kPi * alpha;
    expected["limit_min_abs_gamma"] = 0.5 * (alpha - 1.0);
    if (name == "neu") return Scenario{spec, std::move(both.pair), std::move(both.limit)};
    return Scenario{spec, std::move(both.limit), std::nullopt};
  }
  if (name == "helical3d" || name == "helical3d_limit") {
    const double alpha = p.at("alpha");
    const int n = name == "helical3d" ? as_int(p.at("n"), "n") : 2;
    PairWithLimit both = helical3d(alpha, p.at("beta"), n, p.at("phi"));
    expected["period"] = 2.0 * kPi;
    expected["limit_min_abs_gamma"] = 0.5 * (1.0 - std::abs(alpha));
    if (name == "helical3d") {
      const double nn = n;
      expected["limit_sup_bound"] = std::abs(p.at("beta")) * (nn / (nn * nn - 1.0) + 1.0 / (nn * nn - 1.0) + 1.0 / nn);
      return Scenario{spec, std::move(both.pair), std::move(both.limit)};
    }
    return Scenario{spec, std::move(both.limit), std::nullopt};
  }
  // square
  const double L = p.at("L");
  DAlembertPair pair = square(L);
  expected["period"] = 4.0 * L;
  expected["collapse_time"] = L;
  expected["conserved_energy_plateau"] = 4.0 * L;
  return Scenario{spec, std::move(pair), std::nullopt};
}

}  // namespace relstring
