#include "relstring/convexity2d.hpp"
#include "relstring/scenarios.hpp"
#include "support.hpp"

using namespace relstring;
using testing::kPi;

TEST_CASE("is_uniformly_convex") {
  const ConvexityResult circ = is_uniformly_convex(evaluate_state(circle(1.0), 0.0, 128));
  CHECK(circ.uniformly_convex);
  CHECK(circ.margin == doctest::Approx(1.0).epsilon(1e-14));

  const ConvexityResult sq = is_uniformly_convex(evaluate_state(square(1.0), 0.0, 128));
  CHECK_FALSE(sq.uniformly_convex);
  CHECK(sq.margin == 0.0);

  const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), 1024);
  const double t_min = collapse_time_map(ell, 128).t_min;
  CHECK(is_uniformly_convex(evaluate_state(ell, 0.5 * t_min, 512)).uniformly_convex);

  CHECK(testing::error_of([] { is_uniformly_convex(evaluate_state(helical3d(0.6, 0.8, 3).pair, 0.0, 32)); }) ==
        ErrorCode::WrongDimension);
  CHECK(testing::error_of([] { is_uniformly_convex(evaluate_state(circle(1.0), kPi / 2.0, 32)); }) ==
        ErrorCode::NonRegularCurve);
}

TEST_CASE("convexity is preserved up to the first collapse") {
  for (const PeriodicLoop& shape : {ellipse_loop(2.0, 1.0), symmetric_oval_loop(0.05), egg_loop(0.1)}) {
    const DAlembertPair pair = convex_zero_velocity(shape, 1024);
    const double t_min = collapse_time_map(pair, 256).t_min;
    for (int i = 0; i < 20; ++i)
      CHECK(is_uniformly_convex(evaluate_state(pair, 0.95 * t_min * i / 20.0, 512)).uniformly_convex);
  }
}

TEST_CASE("centrally symmetric bodies collapse at E/4") {
  const DAlembertPair oval = convex_zero_velocity(symmetric_oval_loop(0.05), 1024);
  const CollapseTimes ct = collapse_time_map(oval, 256);
  CHECK(ct.t_max - ct.t_min <= 1e-8);
  CHECK(std::abs(ct.t_min - oval.period() / 4.0) <= 1e-8);
  const CollapseCheck at = detect_collapse(oval, oval.period() / 4.0, 1024);
  REQUIRE(at.point);
  CHECK(at.point->norm() <= 1e-8);
}

TEST_CASE("inclusion_check") {
  const DAlembertPair c = circle(1.0);
  const ConvexSlice k01 = ConvexSlice::from_state(evaluate_state(c, 0.1, 256));
  const ConvexSlice k02 = ConvexSlice::from_state(evaluate_state(c, 0.2, 256));
  CHECK(inclusion_check(k02, k01));
  CHECK_FALSE(inclusion_check(k01, k02));
  CHECK(inclusion_check(k01, k01));

  Points moved = k01.nodes();
  moved.row(0).array() += 3.0;
  CHECK_FALSE(inclusion_check(ConvexSlice::from_polygon(moved, k01.period()), k01));

  Points dart(2, 4);
  dart << 1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.2;
  CHECK(testing::error_of([&] { inclusion_check(ConvexSlice::from_polygon(dart, 4.0), k01); }) ==
        ErrorCode::NotConvex);
}

TEST_CASE("bodies shrink monotonically for zero initial velocity") {
  // Realized direction: K(t2) is contained in K(t1) for t1 < t2.
  const DAlembertPair pair = convex_zero_velocity(egg_loop(0.1), 1024);
  const double t_min = collapse_time_map(pair, 256).t_min;
  for (int i = 0; i + 1 < 10; ++i) {
    const double t1 = 0.9 * t_min * i / 10.0, t2 = 0.9 * t_min * (i + 1) / 10.0;
    const ConvexSlice k1 = ConvexSlice::from_state(evaluate_state(pair, t1, 512));
    const ConvexSlice k2 = ConvexSlice::from_state(evaluate_state(pair, t2, 512));
    CHECK(inclusion_check(k2, k1));
    CHECK_FALSE(inclusion_check(k1, k2));
  }
}

TEST_CASE("collapse_profile") {
  SUBCASE("circle: ratio sin(delta) / delta") {
    const double t_bar = kPi / 2.0;
    const auto rows = collapse_profile(circle(1.0), t_bar, Vec::Zero(2), {t_bar - 0.1, t_bar - 0.05}, 256);
    REQUIRE(rows.size() == 2);
    for (const ProfileRow& r : rows) {
      const double exact = std::sin(r.delta) / r.delta;
      CHECK(std::abs(r.max_ratio - exact) <= 1e-14);
      CHECK(std::abs(r.min_ratio - exact) <= 1e-14);
      CHECK(1.0 - r.min_ratio <= r.delta * r.delta / 6.0);
    }
  }
  SUBCASE("ellipse: deviation bounded by C delta with stable C") {
    const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), 1024);
    const double E = ell.period(), t_bar = E / 4.0;
    const auto rows = collapse_profile(ell, t_bar, Vec::Zero(2), {t_bar - 0.02 * E, t_bar - 0.01 * E}, 1024);
    auto dev = [](const ProfileRow& r) { return std::max(r.max_ratio - 1.0, 1.0 - r.min_ratio); };
    const double c_coarse = dev(rows[0]) / rows[0].delta, c_fine = dev(rows[1]) / rows[1].delta;
    CHECK(c_fine <= 2.0 * c_coarse);
    CHECK(dev(rows[1]) < dev(rows[0]));
  }
  SUBCASE("square: not a light cone") {
    const auto rows = collapse_profile(square(1.0), 1.0, Vec::Zero(2), {0.95}, 1024);
    CHECK(rows[0].spread() > 0.4);
  }
  SUBCASE("no collapse at t_bar") {
    CHECK(testing::error_of([] { collapse_profile(circle(1.0), 1.0, Vec::Zero(2), {0.5}); }) ==
          ErrorCode::NoCollapseAtTbar);
  }
}
