#include <random>

#include "relstring/curve.hpp"
#include "relstring/dalembert.hpp"
#include "relstring/diagnostics.hpp"
#include "relstring/gauge.hpp"
#include "relstring/scenarios.hpp"
#include "support.hpp"

using namespace relstring;
using testing::kPi;

namespace {

VelocityField inward_velocity(double speed) {
  return VelocityField(PeriodicLoop::analytic(2.0 * kPi, 2, [speed](double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return Jet{-speed * Vec{{c, sn}}, -speed * Vec{{-sn, c}}, speed * Vec{{c, sn}}};
  }));
}

PeriodicLoop ellipse_on_unit_interval() {
  return PeriodicLoop::analytic(1.0, 2, [](double s) {
    const double w = 2.0 * kPi;
    const double c = std::cos(w * s), sn = std::sin(w * s);
    return Jet{Vec{{2.0 * c, sn}}, w * Vec{{-2.0 * sn, c}}, -w * w * Vec{{2.0 * c, sn}}};
  });
}

}  // namespace

TEST_CASE("conformal_normalize with zero velocity keeps the circle") {
  const ConformalData out = conformal_normalize(unit_circle_loop(), VelocityField::zero(2.0 * kPi, 2), 256);
  CHECK(out.report.energy_parameter == doctest::Approx(2.0 * kPi).epsilon(1e-10));
  CHECK(out.report.max_norm_residual <= 1e-8);
  for (int j = 0; j < 256; ++j) {
    const double s = out.curve.period() * j / 256;
    CHECK(std::abs(out.curve.derivative(s).norm() - 1.0) <= 1e-8);
  }
}

TEST_CASE("conformal_normalize with inward normal velocity") {
  const ConformalData out = conformal_normalize(unit_circle_loop(), inward_velocity(0.6), 256);
  CHECK(out.report.energy_parameter == doctest::Approx(2.5 * kPi).epsilon(1e-10));
  CHECK(out.report.max_norm_residual <= 1e-8);
  CHECK(out.report.max_orthogonality_residual <= 1e-8);
  for (int j = 0; j < 256; ++j) {
    const double s = out.curve.period() * j / 256;
    CHECK(out.curve.derivative(s).norm() == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(std::abs(out.curve(s).norm() - 1.0) <= 1e-10);
  }
}

TEST_CASE("conformal_normalize rejects luminal velocity and tangential velocity") {
  CHECK(testing::error_of([] { conformal_normalize(unit_circle_loop(), inward_velocity(1.0), 64); }) ==
        ErrorCode::NotStrictlyAdmissible);
  const VelocityField tangential(PeriodicLoop::analytic(2.0 * kPi, 2, [](double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return Jet{0.1 * Vec{{-sn, c}}, -0.1 * Vec{{c, sn}}, 0.1 * Vec{{sn, -c}}};
  }));
  CHECK(testing::error_of([&] { conformal_normalize(unit_circle_loop(), tangential, 64); }) ==
        ErrorCode::NotNormalized);
}

TEST_CASE("conformal_normalize is idempotent") {
  const ConformalData once = conformal_normalize(ellipse_on_unit_interval(), VelocityField::zero(1.0, 2), 512);
  const ConformalData twice = conformal_normalize(once.curve, once.velocity, 512);
  CHECK(std::abs(twice.report.energy_parameter - once.report.energy_parameter) <= 1e-8);
  double worst = 0.0;
  for (int i = 0; i < 2048; ++i) {
    const double s = once.curve.period() * i / 2048;
    worst = std::max(worst, (once.curve(s) - twice.curve(s)).norm());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("rho_profile") {
  const DAlembertPair pair = circle(1.0);
  for (double t : {0.0, 0.4, 1.2}) {
    const Vec rho = rho_profile(evaluate_state(pair, t, 128));
    CHECK((rho.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }

  StringState scaled;
  scaled.period = 2.0 * kPi;
  scaled.grid = periodic_grid(scaled.period, 64);
  scaled.gamma = Points(2, 64);
  scaled.gamma_x = Points(2, 64);
  scaled.gamma_t = Points::Zero(2, 64);
  for (int j = 0; j < 64; ++j) {
    const double s = scaled.grid(j);
    scaled.gamma.col(j) << 2.0 * std::cos(s), 2.0 * std::sin(s);
    scaled.gamma_x.col(j) << -2.0 * std::sin(s), 2.0 * std::cos(s);
  }
  CHECK((rho_profile(scaled).array() - 2.0).abs().maxCoeff() <= 1e-14);

  scaled.gamma_t.col(3) << 1.0, 0.0;
  CHECK(testing::error_of([&] { rho_profile(scaled); }) == ErrorCode::NotStrictlyAdmissible);
}

TEST_CASE("orthogonal_gauge") {
  const DAlembertPair pair = circle(1.0);
  const int N = 128;

  SUBCASE("already orthogonal evolution keeps r = x") {
    std::vector<StringState> states;
    for (int k = 0; k <= 10; ++k) states.push_back(evaluate_state(pair, 0.1 * k, N));
    const GaugeMap map = orthogonal_gauge(states, N);
    for (Eigen::Index k = 0; k < map.r.rows(); ++k)
      CHECK((map.r.row(k).transpose() - map.grid).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("single slice") {
    const GaugeMap map = orthogonal_gauge({evaluate_state(pair, 0.0, N)}, N);
    CHECK(map.r.rows() == 1);
    CHECK((map.r.row(0).transpose() - map.grid).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("sheared circle is re-orthogonalized") {
    // gamma(t, x) = cos t (cos(x + eps t), sin(x + eps t)); the oracle map is r = x - eps t.
    const double eps = 0.1;
    const int n = 512;
    const double h = 2.0 * kPi / n;
    const double dt = h / 2.0;
    std::vector<StringState> states;
    for (int k = 0; k <= 40; ++k) {
      const double t = k * dt;
      StringState st = evaluate_state(pair, t, n);
      for (int j = 0; j < n; ++j) {
        const double x = st.grid(j) + eps * t;
        const Vec u{{std::cos(x), std::sin(x)}};
        const Vec up{{-std::sin(x), std::cos(x)}};
        st.gamma.col(j) = std::cos(t) * u;
        st.gamma_x.col(j) = std::cos(t) * up;
        st.gamma_t.col(j) = -std::sin(t) * u + eps * std::cos(t) * up;
      }
      states.push_back(st);
    }
    const GaugeMap map = orthogonal_gauge(states, n);
    for (Eigen::Index k = 0; k < map.r.rows(); ++k)
      CHECK((map.r.row(k).transpose().array() - map.grid.array() + eps * map.times(k)).abs().maxCoeff() <= 1e-10);
    CHECK(recomposed_orthogonality(states, map) <= 1e-6);
  }
  SUBCASE("degenerate slice") {
    std::vector<StringState> states{evaluate_state(pair, kPi / 2.0, N)};
    CHECK(testing::error_of([&] { orthogonal_gauge(states, N); }) == ErrorCode::NonRegularCurve);
  }
}

TEST_CASE("gauge persists in time") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DAlembertPair analytic = circle(1.0);
  for (int i = 0; i < 20; ++i) {
    const ConstraintResiduals c = constraint_residuals(evaluate_state(analytic, u(rng) * analytic.period(), 256));
    CHECK(c.orthogonality <= 1e-8);
    CHECK(c.unit_norm <= 1e-8);
  }

  auto spline_worst = [&](int N) {
    const DAlembertPair pair = convex_zero_velocity(ellipse_loop(2.0, 1.0), N);
    std::mt19937_64 local(5);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const ConstraintResiduals c = constraint_residuals(evaluate_state(pair, u(local) * pair.period(), 2 * N));
      worst = std::max({worst, c.orthogonality, c.unit_norm});
    }
    return worst;
  };
  const double coarse = spline_worst(256);
  const double fine = spline_worst(512);
  CHECK(fine <= coarse / 2.0);
}
