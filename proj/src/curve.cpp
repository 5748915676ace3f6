#include "relstring/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "relstring/errors.hpp"
#include "relstring/quadrature.hpp"
#include "relstring/tolerances.hpp"

namespace relstring {

namespace {

constexpr int kFineFactor = 4;

}  // namespace

double total_length(const PeriodicLoop& curve) {
  if (const PiecewiseLinearData* poly = curve.piecewise()) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < poly->slopes.cols(); ++i)
      sum += (poly->breakpoints[i + 1] - poly->breakpoints[i]) * poly->slopes.col(i).norm();
    return sum;
  }
  auto speed = [&](double s) { return curve.derivative(s).norm(); };
  if (const Points* nodes = curve.samples()) {
    const Eigen::Index n = nodes->cols();
    const double h = curve.period() / static_cast<double>(n);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sum += quad::gauss_legendre_composite(speed, i * h, (i + 1) * h, 2);
    return sum;
  }
  return quad::adaptive_gauss_kronrod(speed, 0.0, curve.period(), 1e-14 * curve.period());
}

PeriodicLoop periodic_interpolate(const Points& samples, double period) {
  return PeriodicLoop::sampled(samples, period);
}

double min_speed(const PeriodicLoop& curve, int N) {
  const int cells = kFineFactor * std::max(N, 8);
  const double h = curve.period() / cells;
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cells; ++i) {
    lo = std::min(lo, curve.derivative(i * h).norm());
    for (double node : quad::kGaussNodes) lo = std::min(lo, curve.derivative((i + 0.5 + 0.5 * node) * h).norm());
  }
  return lo;
}

WeightedSamples weighted_reparametrize(const PeriodicLoop& curve, const SpeedWeight& weight, int N) {
  if (N < 8) fail(ErrorCode::TooFewSamples, "reparametrization needs N >= 8, got " + std::to_string(N));
  const double lo = min_speed(curve, N);
  if (lo < tolerances().regular_speed)
    fail(ErrorCode::NonRegularCurve, "min |curve'| = " + std::to_string(lo));

  const double period = curve.period();
  const int cells = kFineFactor * N;
  const double ds = period / cells;
  auto density = [&](double s) {
    const Jet j = curve.jet(s);
    return weight(s, j) * j.d1.norm();
  };

  std::vector<double> cumulative(static_cast<std::size_t>(cells) + 1, 0.0);
  for (int i = 0; i < cells; ++i)
    cumulative[i + 1] = cumulative[i] + quad::gauss_legendre_composite(density, i * ds, (i + 1) * ds, 2);
  const double total = cumulative.back();

  WeightedSamples out;
  out.total = total;
  out.params.resize(N);
  out.params(0) = 0.0;
  for (int j = 1; j < N; ++j) {
    const double target = total * j / N;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    int cell = std::clamp(static_cast<int>(it - cumulative.begin()) - 1, 0, cells - 1);
    const double a = cell * ds;
    const double b = a + ds;
    const double base = cumulative[cell];
    const double span = cumulative[cell + 1] - base;
    // Newton on the exact cell integral, safeguarded by the cell bracket.
    double lo_s = a;
    double hi_s = b;
    double s = a + ds * (target - base) / span;
    for (int iter = 0; iter < 60; ++iter) {
      const double f = base + quad::gauss_legendre_composite(density, a, s, 2) - target;
      if (f > 0.0) hi_s = s; else lo_s = s;
      double next = s - f / density(s);
      if (!(next > lo_s && next < hi_s)) next = 0.5 * (lo_s + hi_s);
      const double step = std::abs(next - s);
      s = next;
      if (step <= 1e-16 * period) break;
    }
    out.params(j) = s;
  }
  return out;
}

PeriodicLoop arclength_reparametrize(const PeriodicLoop& curve, int N) {
  const WeightedSamples ws = weighted_reparametrize(curve, [](double, const Jet&) { return 1.0; }, N);
  const int n = curve.dimension();
  Points samples(n, N);
  Points d1(n, N);
  Points d2(n, N);
  for (int j = 0; j < N; ++j) {
    const Jet jet = curve.jet(ws.params(j));
    const double sp2 = jet.d1.squaredNorm();
    const double sp = std::sqrt(sp2);
    samples.col(j) = jet.value;
    d1.col(j) = jet.d1 / sp;
    d2.col(j) = jet.d2 / sp2 - jet.d1 * (jet.d1.dot(jet.d2) / (sp2 * sp2));
  }
  return PeriodicLoop::sampled_hermite(samples, d1, d2, ws.total);
}

}  // namespace relstring
