#include <random>

#include "relstring/dalembert.hpp"
#include "relstring/gauge.hpp"
#include "relstring/scenarios.hpp"
#include "support.hpp"

using namespace relstring;
using testing::kPi;

TEST_CASE("decompose with zero velocity returns a = b = curve") {
  const PeriodicLoop c = unit_circle_loop();
  const DAlembertPair pair = decompose(c, VelocityField::zero(c.period(), 2));
  CHECK(pair.a().shares_backend(c));
  CHECK(pair.b().shares_backend(c));
  CHECK(pair.zero_initial_velocity());
  // gamma(t, x) = (cos x, sin x) cos t
  const StringState st = evaluate_state(pair, 0.7, 64);
  for (int j = 0; j < 64; ++j) {
    const double x = st.grid(j);
    CHECK((st.gamma.col(j) - std::cos(0.7) * Vec{{std::cos(x), std::sin(x)}}).norm() <= 1e-15);
  }
}

TEST_CASE("decompose reconstructs the initial data") {
  // Normal zero-mean perturbation v0 = eps sin(2x) u(x) on a rescaled circle, made
  // conformal so that |gamma'|^2 + |v0|^2 = 1.
  const double eps = 0.1;
  const PeriodicLoop raw = unit_circle_loop();
  const VelocityField v0(PeriodicLoop::analytic(2.0 * kPi, 2, [eps](double s) {
    const Vec u{{std::cos(s), std::sin(s)}};
    const Vec up{{-std::sin(s), std::cos(s)}};
    const double f = eps * std::sin(2 * s), df = 2 * eps * std::cos(2 * s), ddf = -4 * eps * std::sin(2 * s);
    return Jet{f * u, df * u + f * up, ddf * u + 2 * df * up - f * u};
  }));
  const ConformalData cd = conformal_normalize(raw, v0, 1024);
  const DAlembertPair pair = decompose(cd.curve, cd.velocity);
  CHECK(pair.mode() == ConstraintMode::UnitSpeed);
  const int N = 512;
  const StringState st = evaluate_state(pair, 0.0, N);
  double pos = 0.0, vel = 0.0;
  for (int j = 0; j < N; ++j) {
    pos = std::max(pos, (st.gamma.col(j) - cd.curve(st.grid(j))).norm());
    vel = std::max(vel, (st.gamma_t.col(j) - cd.velocity(st.grid(j))).norm());
  }
  CHECK(pos <= 1e-10);
  CHECK(vel <= 1e-10);
}

TEST_CASE("decompose rejects non-normalized data") {
  const PeriodicLoop big = PeriodicLoop::analytic(2.0 * kPi, 2, [](double s) {
    return Jet{1.1 * Vec{{std::cos(s), std::sin(s)}}, 1.1 * Vec{{-std::sin(s), std::cos(s)}},
               -1.1 * Vec{{std::cos(s), std::sin(s)}}};
  });
  CHECK(testing::error_of([&] { decompose(big, VelocityField::zero(2.0 * kPi, 2)); }) == ErrorCode::NotNormalized);
}

TEST_CASE("decompose rejects a velocity with nonzero mean") {
  const VelocityField drift(PeriodicLoop::analytic(2.0 * kPi, 2, [](double) {
    return Jet{Vec{{0.1, 0.0}}, Vec::Zero(2), Vec::Zero(2)};
  }));
  const PeriodicLoop scaled = PeriodicLoop::analytic(2.0 * kPi, 2, [](double s) {
    const double r = std::sqrt(0.99);
    return Jet{r * Vec{{std::cos(s), std::sin(s)}}, r * Vec{{-std::sin(s), std::cos(s)}},
               -r * Vec{{std::cos(s), std::sin(s)}}};
  });
  CHECK(testing::error_of([&] { decompose(scaled, drift, 128); }) == ErrorCode::NonZeroMeanVelocity);
}

TEST_CASE("evaluate_state on the circle") {
  const DAlembertPair pair = circle(1.0);
  const double E = pair.period();
  CHECK(testing::max_abs(evaluate_state(pair, E / 4.0, 256).gamma) <= 1e-15);

  const StringState s0 = evaluate_state(pair, 0.0, 256);
  for (int j = 0; j < 256; ++j) {
    const double x = s0.grid(j);
    CHECK((s0.gamma.col(j) - Vec{{std::cos(x), std::sin(x)}}).norm() <= 1e-15);
    CHECK(s0.gamma_t.col(j).norm() == 0.0);
  }
  const StringState sE = evaluate_state(pair, E, 256);
  CHECK(testing::max_abs(sE.gamma - s0.gamma) <= 1e-12);
  CHECK(testing::max_abs(sE.gamma_x - s0.gamma_x) <= 1e-12);
}

TEST_CASE("evaluate_state accepts negative times and is time periodic for a = b") {
  const DAlembertPair pair = convex_zero_velocity(ellipse_loop(2.0, 1.0), 256);
  const double E = pair.period();
  for (double t : {-0.7, 0.3, 2.1}) {
    const StringState s = evaluate_state(pair, t, 128);
    const StringState shifted = evaluate_state(pair, t + E, 128);
    CHECK(testing::max_abs(s.gamma - shifted.gamma) <= 1e-12);
  }
}

TEST_CASE("evaluation is consistent under shifts of x") {
  const PairWithLimit n = neu(5);
  const double t = 0.37, delta = n.pair.period() / 64;
  const StringState st = evaluate_state(n.pair, t, 64);
  for (int j = 0; j + 1 < 64; ++j) {
    const double x = st.grid(j) + delta;
    const Vec direct = 0.5 * (n.pair.a()(x + t) + n.pair.b()(x - t));
    CHECK((direct - st.gamma.col(j + 1)).norm() <= 1e-14);
  }
}

TEST_CASE("discrete wave residual converges at order 2") {
  const DAlembertPair pair = convex_zero_velocity(ellipse_loop(2.0, 1.0), 1024);
  auto g = [&](double t, double x) { return Vec(0.5 * (pair.a()(x + t) + pair.b()(x - t))); };
  auto residual = [&](double h) {
    const double t = 0.4, dt = h / 2.0;
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) {
      const double x = pair.period() * j / 64;
      const Vec c = g(t, x);
      const Vec gtt = (g(t + dt, x) - 2.0 * c + g(t - dt, x)) / (dt * dt);
      const Vec gxx = (g(t, x + h) - 2.0 * c + g(t, x - h)) / (h * h);
      worst = std::max(worst, (gtt - gxx).norm());
    }
    return worst;
  };
  const double e1 = residual(0.08), e2 = residual(0.04), e3 = residual(0.02);
  CHECK(e1 <= 1e-2);
  CHECK(std::log2(e1 / e2) >= 1.8);
  CHECK(std::log2(e2 / e3) >= 1.8);
}

TEST_CASE("collapse_time_map") {
  SUBCASE("circle") {
    const CollapseTimes ct = collapse_time_map(circle(1.0), 128);
    CHECK(std::abs(ct.t_min - kPi / 2.0) <= 1e-12);
    CHECK(std::abs(ct.t_max - kPi / 2.0) <= 1e-12);
  }
  SUBCASE("ellipse is centrally symmetric") {
    const DAlembertPair pair = convex_zero_velocity(ellipse_loop(2.0, 1.0), 1024);
    const CollapseTimes ct = collapse_time_map(pair, 256);
    CHECK(std::abs(ct.t_min - pair.period() / 4.0) <= 1e-8);
    CHECK(std::abs(ct.t_max - pair.period() / 4.0) <= 1e-8);
  }
  SUBCASE("egg is not") {
    const DAlembertPair pair = convex_zero_velocity(egg_loop(0.1), 1024);
    const double E = pair.period();
    const CollapseTimes ct = collapse_time_map(pair, 256);
    CHECK(ct.t_min < ct.t_max - 1e-4);
    CHECK(ct.t_min > 0.0);
    CHECK(ct.t_max < E / 2.0);
    for (Eigen::Index j = 0; j < ct.grid.size(); ++j) {
      const double x = ct.grid(j), t = ct.t_of_x(j);
      CHECK((pair.a().derivative(x + t) + pair.a().derivative(x - t)).norm() <= 1e-10);
    }
  }
  SUBCASE("preconditions") {
    CHECK(testing::error_of([] { collapse_time_map(neu(4).pair, 64); }) == ErrorCode::NotZeroVelocity);
    CHECK(testing::error_of([] { collapse_time_map(square(1.0), 64); }) == ErrorCode::NotConvex);
  }
}

TEST_CASE("detect_collapse") {
  const DAlembertPair pair = circle(1.0);
  const double E = pair.period();
  const CollapseCheck hit = detect_collapse(pair, E / 4.0, 256, 1e-8);
  REQUIRE(hit.point);
  CHECK(hit.point->norm() <= 1e-15);
  CHECK(hit.extinction_residual <= 10.0 * 1e-8);
  CHECK_FALSE(detect_collapse(pair, E / 8.0, 256).point);

  const CollapseCheck sq = detect_collapse(square(1.0), 1.0, 512);
  REQUIRE(sq.point);
  CHECK(sq.point->norm() == 0.0);
}

TEST_CASE("singular_set") {
  CHECK(singular_set(circle(1.0), 2.0 * kPi / 8.0, 256).empty());
  const DAlembertPair sq = square(1.0);
  const int N = 512;
  const double h = 4.0 / N;
  CHECK(singular_set(sq, 0.25, N).empty());
  const auto runs = singular_set(sq, 0.75, N);
  REQUIRE(runs.size() == 4);
  for (const SingularInterval& iv : runs) {
    CHECK(std::abs(iv.length - 0.5) <= 2.0 * h);
    // Side midpoints sit at parameters 0.5, 1.5, 2.5, 3.5.
    const double mid = iv.center - std::floor(iv.center);
    CHECK(std::abs(mid - 0.5) <= h);
  }
}

TEST_CASE("pair construction checks the constraint mode") {
  const PairWithLimit n = neu(6);
  CHECK(testing::error_of([&] { DAlembertPair(n.limit.a(), n.limit.b(), ConstraintMode::UnitSpeed); }) ==
        ErrorCode::NotNormalized);
  CHECK(testing::error_of([] { DAlembertPair(unit_circle_loop(), square_loop(1.0).loop(), ConstraintMode::UnitSpeed); }) ==
        ErrorCode::InvalidLoop);
}
