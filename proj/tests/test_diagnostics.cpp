#include <random>

#include "relstring/diagnostics.hpp"
#include "relstring/scenarios.hpp"
#include "support.hpp"

using namespace relstring;
using testing::kPi;

namespace {

// Loop c (cos(m s), sin(m s)) / m: constant speed c, period 2 pi.
PeriodicLoop scaled_winding(double c, int m) {
  return PeriodicLoop::analytic(2.0 * kPi, 2, [c, m](double s) {
    const double cs = std::cos(m * s), sn = std::sin(m * s);
    return Jet{c / m * Vec{{cs, sn}}, c * Vec{{-sn, cs}}, -c * m * Vec{{cs, sn}}};
  });
}

StringState circle_state(double scale, int N) {
  StringState st;
  st.period = 2.0 * kPi;
  st.grid = periodic_grid(st.period, N);
  st.gamma = Points(2, N);
  st.gamma_x = Points(2, N);
  st.gamma_t = Points::Zero(2, N);
  for (int j = 0; j < N; ++j) {
    const double s = st.grid(j);
    st.gamma.col(j) << scale * std::cos(s), scale * std::sin(s);
    st.gamma_x.col(j) << -scale * std::sin(s), scale * std::cos(s);
  }
  return st;
}

bool order_two(double coarse, double fine) {
  if (coarse <= 1e-10 && fine <= 1e-10) return true;
  return fine * 3.0 <= coarse;
}

}  // namespace

TEST_CASE("lagrangian") {
  CHECK(lagrangian(Vec::Zero(2), Vec{{1.0, 0.0}}) == 1.0);
  CHECK(lagrangian(Vec{{0.6, 0.0}}, Vec{{0.0, 0.8}}) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(testing::error_of([] { lagrangian(Vec{{2.0, 0.0}}, Vec{{0.0, 1.0}}); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("lagrangian is positively one-homogeneous in eta") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  while (checked < 100) {
    const Vec xi = 0.9 * Vec{{g(rng), g(rng), g(rng)}}.normalized() * std::abs(std::tanh(g(rng)));
    const Vec eta{{g(rng), g(rng), g(rng)}};
    const double alpha = u(rng);
    const double base = lagrangian(xi, eta);
    CHECK(std::abs(lagrangian(xi, alpha * eta) - std::abs(alpha) * base) <= 1e-12 * std::max(1.0, base));
    ++checked;
  }
}

TEST_CASE("minkowski_area") {
  const DAlembertPair c = circle(1.0);
  CHECK(std::abs(minkowski_area(c, 0.0, kPi / 2.0, 256, 200) - kPi * kPi / 2.0) <= 1e-6);
  CHECK(minkowski_area(c, 0.3, 0.3, 64, 10) == 0.0);
  CHECK(testing::error_of([&] { minkowski_area(c, 1.0, 0.0, 64, 10); }) == ErrorCode::BadParams);

  // Cylinder, A = unit circle: l = |gamma_x|^2 = (1 + cos((x+t)/2 - (x-t)/eps)) / 2, whose x-average
  // vanishes when 2/eps is an integer, so the area is E (t1 - t0) / 2.
  const DAlembertPair cyl = cylinder(unit_circle_loop(), 0.125);
  CHECK(std::abs(minkowski_area(cyl, 0.0, 1.0, 1024, 200) - 2.0 * kPi) <= 1e-6);
}

TEST_CASE("minkowski area is invariant under a reparametrization") {
  // The circle composed with x -> x + eps t, integrated directly.
  const double eps = 0.2, T = kPi / 2.0;
  const int N = 256, M = 200;
  double area = 0.0;
  for (int k = 0; k <= M; ++k) {
    const double t = T * k / M;
    const double w = (k == 0 || k == M) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    double row = 0.0;
    for (int j = 0; j < N; ++j) {
      const double x = 2.0 * kPi * j / N + eps * t;
      const Vec u{{std::cos(x), std::sin(x)}}, up{{-std::sin(x), std::cos(x)}};
      row += lagrangian(Vec(-std::sin(t) * u + eps * std::cos(t) * up), Vec(std::cos(t) * up));
    }
    area += w * row * (2.0 * kPi / N);
  }
  area *= T / (3.0 * M);
  CHECK(std::abs(area - minkowski_area(circle(1.0), 0.0, T, N, M)) <= 1e-6);
}

TEST_CASE("conserved_energy") {
  const DAlembertPair c = circle(1.0);
  for (double t : {0.1, 0.8, 1.5}) CHECK(conserved_energy(evaluate_state(c, t, 256)) == doctest::Approx(2.0 * kPi));

  const DAlembertPair sq = square(1.0);
  CHECK(std::abs(conserved_energy(evaluate_state(sq, 0.25, 512)) - 4.0) <= 1e-12);
  CHECK(std::abs(conserved_energy(evaluate_state(sq, 0.75, 512)) - 2.0) <= 1e-12);
  // Chord weights straddle the octagon vertices, so the image energy converges at first order.
  const double coarse = std::abs(image_energy(evaluate_state(sq, 0.25, 512)) - 4.0);
  const double fine = std::abs(image_energy(evaluate_state(sq, 0.25, 1024)) - 4.0);
  CHECK(coarse <= 2.0 / 512);
  CHECK(fine <= 0.6 * coarse);
}

TEST_CASE("square energy plateau and decay") {
  const DAlembertPair sq = square(1.0);
  for (int i = 0; i < 20; ++i) {
    const double t = 0.5 * i / 20.0;
    CHECK(std::abs(conserved_energy(evaluate_state(sq, t, 512)) - 4.0) <= 1e-12);
  }
  double prev = conserved_energy(evaluate_state(sq, 0.5, 512));
  for (int i = 1; i < 20; ++i) {
    const double e = conserved_energy(evaluate_state(sq, 0.5 + 0.5 * i / 20.0, 512));
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("energy conservation") {
  const DAlembertPair c = circle(1.0);
  const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), 1024);
  const double t_min = collapse_time_map(ell, 256).t_min;
  auto drift = [](const DAlembertPair& pair, double T) {
    const double e0 = conserved_energy(evaluate_state(pair, 0.0, 1024));
    double worst = 0.0;
    for (int k = 1; k < 50; ++k)
      worst = std::max(worst, std::abs(conserved_energy(evaluate_state(pair, T * k / 49.0, 1024)) / e0 - 1.0));
    return worst;
  };
  CHECK(drift(c, 0.9 * kPi / 2.0) <= 1e-10);
  CHECK(drift(ell, 0.9 * t_min) <= 1e-6);
}

TEST_CASE("constraint_residuals") {
  const ConstraintResiduals circ = constraint_residuals(evaluate_state(circle(1.0), 0.3, 256));
  CHECK(circ.orthogonality <= 1e-12);
  CHECK(circ.unit_norm <= 1e-12);

  const PairWithLimit n = neu(8);
  CHECK(constraint_residuals(evaluate_state(n.limit, 0.0, 512)).unit_norm > 1e-3);

  CHECK(constraint_residuals(circle_state(1.1, 64)).unit_norm == doctest::Approx(0.21).epsilon(1e-12));
}

TEST_CASE("geometry") {
  const DAlembertPair c = circle(1.0);
  SUBCASE("circle at t = 0") {
    const StringState st = evaluate_state(c, 0.0, 64);
    const GeometryFields g = geometry(st);
    for (int j = 0; j < 64; ++j) {
      const Vec u{{std::cos(st.grid(j)), std::sin(st.grid(j))}};
      CHECK(std::abs(g.kappa.col(j).norm() - 1.0) <= 1e-14);
      CHECK(g.v.col(j).norm() == 0.0);
      CHECK((g.accel.col(j) + u).norm() <= 1e-14);
    }
  }
  SUBCASE("circle at t") {
    const double t = 0.6;
    const GeometryFields g = geometry(evaluate_state(c, t, 64));
    for (int j = 0; j < 64; ++j) {
      CHECK(std::abs(g.v.col(j).norm() - std::sin(t)) <= 1e-14);
      CHECK(std::abs(g.kappa.col(j).norm() - 1.0 / std::cos(t)) <= 1e-13);
      CHECK(std::abs((1.0 - g.v.col(j).squaredNorm()) * g.kappa.col(j).norm() - g.accel.col(j).norm()) <= 1e-13);
    }
  }
  SUBCASE("flat sides of the square") {
    const GeometryFields g = geometry(evaluate_state(square(1.0), 0.25, 512));
    CHECK(g.kappa.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("fields are normal") {
    const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), 512);
    const StringState st = evaluate_state(ell, 0.7, 256);
    const GeometryFields g = geometry(st);
    for (int j = 0; j < 256; ++j) {
      const Vec tau = st.gamma_x.col(j).normalized();
      CHECK(std::abs(g.kappa.col(j).dot(tau)) <= 1e-12);
      CHECK(std::abs(g.v.col(j).dot(tau)) <= 1e-12);
      CHECK(std::abs(g.accel.col(j).dot(tau)) <= 1e-12);
    }
  }
  SUBCASE("singular slice") {
    CHECK(testing::error_of([&] { geometry(evaluate_state(c, kPi / 2.0, 64)); }) == ErrorCode::NonRegularCurve);
  }
}

TEST_CASE("geometric_residual") {
  CHECK(geometric_residual(evaluate_state(circle(1.0), 0.7, 256)) <= 1e-10);

  std::vector<double> res;
  for (int N : {512, 1024}) {
    const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), N);
    const double t = 0.3 * collapse_time_map(ell, 128).t_min;
    res.push_back(geometric_residual(evaluate_state(ell, t, N)));
  }
  CHECK(res[0] <= 1e-4);
  CHECK(order_two(res[0], res[1]));

  const PairWithLimit n = neu(8);
  CHECK(geometric_residual(evaluate_state(n.limit, 0.3, 512)) > 0.01);
}

TEST_CASE("el_residual") {
  const ELResidual circ = el_residual(circle(1.0), 0.5, 256);
  CHECK(circ.scalar <= 1e-6);
  CHECK(circ.vector <= 1e-6);

  std::vector<double> res;
  for (int N : {512, 1024}) {
    const DAlembertPair ell = convex_zero_velocity(ellipse_loop(2.0, 1.0), N);
    const double t = 0.2 * collapse_time_map(ell, 128).t_min;
    const ELResidual r = el_residual(ell, t, N);
    res.push_back(std::max(r.scalar, r.vector));
  }
  CHECK(res[0] <= 1e-4);
  CHECK(order_two(res[0], res[1]));

  CHECK(el_residual(neu(8).limit, 0.3, 512).vector > 0.01);
}

TEST_CASE("phi_sectional_check") {
  SUBCASE("unit-speed gauge pair") {
    const PhiCheck p = phi_sectional_check(evaluate_state(circle(1.0), 0.4, 256));
    CHECK((p.phi.array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(p.residual <= 1e-8);
  }
  SUBCASE("equal-speed sub-unit pair") {
    const DAlembertPair pair(scaled_winding(0.8, 1), scaled_winding(0.8, 2), ConstraintMode::SubUnit);
    for (double t : {0.3, 1.1}) {
      const PhiCheck p = phi_sectional_check(evaluate_state(pair, t, 1024));
      CHECK(p.residual <= 1e-10);
      CHECK((p.phi.array() - 1.0).abs().maxCoeff() > 0.1);
    }
  }
  SUBCASE("luminal node") {
    StringState st = evaluate_state(circle(1.0), 0.4, 32);
    st.gamma_t.col(5) = Vec{{1.0, 0.0}};
    CHECK(testing::error_of([&] { phi_sectional_check(st); }) == ErrorCode::NotStrictlyAdmissible);
  }
}

TEST_CASE("diagnose") {
  const DiagnosticsReport r = diagnose(circle(1.0), 0.5, 256);
  CHECK(r.t == 0.5);
  CHECK(r.conserved_energy == doctest::Approx(2.0 * kPi));
  CHECK(r.min_speed == doctest::Approx(std::cos(0.5)));
  CHECK(r.max_normal_velocity == doctest::Approx(std::sin(0.5)));
  CHECK(r.max_el_residual <= 1e-6);
  CHECK(r.values()[0] == 0.5);
  CHECK(DiagnosticsReport::kColumns.size() == r.values().size());

  // At the collapse every node is degenerate; residuals fall back to 0.
  const DiagnosticsReport c = diagnose(circle(1.0), kPi / 2.0, 64);
  CHECK(c.conserved_energy == 0.0);
  CHECK(c.max_geometric_residual == 0.0);
}
