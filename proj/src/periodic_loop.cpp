#include "relstring/periodic_loop.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relstring/errors.hpp"
#include "relstring/quadrature.hpp"

namespace relstring {

PeriodicLoop PeriodicLoop::analytic(double period, int dimension, JetFn fn) {
  if (!(period > 0.0)) fail(ErrorCode::InvalidLoop, "period must be positive");
  if (dimension < 2) fail(ErrorCode::WrongDimension, "dimension must be at least 2");
  return PeriodicLoop(period, dimension, std::make_shared<const Impl>(AnalyticImpl{std::move(fn)}));
}

PeriodicLoop PeriodicLoop::sampled(const Points& samples, double period) {
  const Eigen::Index n = samples.cols();
  if (n < 8) fail(ErrorCode::TooFewSamples, "periodic spline needs at least 8 samples, got " + std::to_string(n));
  if (!(period > 0.0)) fail(ErrorCode::InvalidLoop, "period must be positive");
  if (samples.rows() < 2) fail(ErrorCode::WrongDimension, "dimension must be at least 2");

  SplineImpl impl{PeriodicCubicSpline(samples, period)};
  return PeriodicLoop(period, static_cast<int>(samples.rows()), std::make_shared<const Impl>(std::move(impl)));
}

PeriodicLoop PeriodicLoop::sampled_hermite(const Points& samples, const Points& d1, const Points& d2, double period) {
  const Eigen::Index n = samples.cols();
  if (n < 8) fail(ErrorCode::TooFewSamples, "periodic spline needs at least 8 samples, got " + std::to_string(n));
  if (!(period > 0.0)) fail(ErrorCode::InvalidLoop, "period must be positive");
  if (samples.rows() < 2) fail(ErrorCode::WrongDimension, "dimension must be at least 2");

  HermiteImpl impl{PeriodicQuinticHermite(samples, d1, d2, period)};
  return PeriodicLoop(period, static_cast<int>(samples.rows()), std::make_shared<const Impl>(std::move(impl)));
}

PeriodicLoop PeriodicLoop::piecewise_linear(PiecewiseLinearData data) {
  const auto& bp = data.breakpoints;
  const std::size_t m = bp.size() < 2 ? 0 : bp.size() - 1;
  if (m < 1 || static_cast<Eigen::Index>(m) != data.slopes.cols())
    fail(ErrorCode::InvalidLoop, "piecewise-linear loop needs m+1 breakpoints for m slopes");
  if (bp.front() != 0.0) fail(ErrorCode::InvalidLoop, "first breakpoint must be 0");
  for (std::size_t i = 0; i < m; ++i)
    if (!(bp[i + 1] > bp[i])) fail(ErrorCode::InvalidLoop, "breakpoints must be strictly increasing");
  if (data.origin.size() != data.slopes.rows()) fail(ErrorCode::InvalidLoop, "origin dimension mismatch");
  if (data.slopes.rows() < 2) fail(ErrorCode::WrongDimension, "dimension must be at least 2");

  Points vertices(data.slopes.rows(), static_cast<Eigen::Index>(m + 1));
  vertices.col(0) = data.origin;
  double scale = data.origin.norm();
  for (std::size_t i = 0; i < m; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    vertices.col(c + 1) = vertices.col(c) + (bp[i + 1] - bp[i]) * data.slopes.col(c);
    scale = std::max(scale, vertices.col(c + 1).norm());
  }
  const double gap = (vertices.col(static_cast<Eigen::Index>(m)) - vertices.col(0)).norm();
  if (gap > 1e-12 * std::max(1.0, scale))
    fail(ErrorCode::InvalidLoop, "piecewise-linear loop does not close (gap " + std::to_string(gap) + ")");
  // Snap the seam so that evaluation is exactly periodic.
  vertices.col(static_cast<Eigen::Index>(m)) = vertices.col(0);

  const double period = bp.back();
  const int dim = static_cast<int>(data.slopes.rows());
  return PeriodicLoop(period, dim, std::make_shared<const Impl>(PolygonImpl{std::move(data), std::move(vertices)}));
}

Backend PeriodicLoop::backend() const {
  switch (impl_->index()) {
    case 0: return Backend::Analytic;
    case 1:
    case 2: return Backend::SampledSpline;
    default: return Backend::PiecewiseLinear;
  }
}

Jet PeriodicLoop::jet(double s) const {
  const double w = wrap_periodic(s, period_);
  if (const auto* a = std::get_if<AnalyticImpl>(impl_.get())) return a->fn(w);

  if (const auto* sp = std::get_if<SplineImpl>(impl_.get())) {
    auto e = sp->spline.eval(w);
    return Jet{std::move(e.value), std::move(e.d1), std::move(e.d2)};
  }
  if (const auto* hs = std::get_if<HermiteImpl>(impl_.get())) {
    auto e = hs->spline.eval(w);
    return Jet{std::move(e.value), std::move(e.d1), std::move(e.d2)};
  }

  const auto& poly = std::get<PolygonImpl>(*impl_);
  const auto& bp = poly.data.breakpoints;
  const auto it = std::upper_bound(bp.begin(), bp.end(), w);
  Eigen::Index seg = static_cast<Eigen::Index>(it - bp.begin()) - 1;
  seg = std::clamp<Eigen::Index>(seg, 0, poly.data.slopes.cols() - 1);
  Jet out;
  out.d1 = poly.data.slopes.col(seg);
  out.value = poly.vertices.col(seg) + (w - bp[static_cast<std::size_t>(seg)]) * out.d1;
  out.d2 = Vec::Zero(dimension_);
  return out;
}

const Points* PeriodicLoop::samples() const {
  if (const auto* sp = std::get_if<SplineImpl>(impl_.get())) return &sp->spline.values();
  if (const auto* hs = std::get_if<HermiteImpl>(impl_.get())) return &hs->spline.values();
  return nullptr;
}

const PiecewiseLinearData* PeriodicLoop::piecewise() const {
  const auto* poly = std::get_if<PolygonImpl>(impl_.get());
  return poly ? &poly->data : nullptr;
}

const Points* PeriodicLoop::vertices() const {
  const auto* poly = std::get_if<PolygonImpl>(impl_.get());
  return poly ? &poly->vertices : nullptr;
}

VelocityField VelocityField::zero(double period, int dimension) {
  VelocityField v(PeriodicLoop::analytic(period, dimension, [dimension](double) {
    return Jet{Vec::Zero(dimension), Vec::Zero(dimension), Vec::Zero(dimension)};
  }));
  v.zero_ = true;
  return v;
}

Vec VelocityField::integral() const {
  if (zero_) return Vec::Zero(dimension());
  Vec total = Vec::Zero(dimension());
  if (const Points* nodes = field_.samples()) {
    // One 10-point Gauss rule per cell is exact for the polynomial pieces.
    const Eigen::Index n = nodes->cols();
    const double h = period() / static_cast<double>(n);
    for (int c = 0; c < dimension(); ++c)
      for (Eigen::Index i = 0; i < n; ++i)
        total(c) += quad::gauss_legendre([&](double s) { return field_(s)(c); }, i * h, (i + 1) * h);
    return total;
  }
  if (const PiecewiseLinearData* poly = field_.piecewise()) {
    const Points& verts = *field_.vertices();
    for (Eigen::Index i = 0; i < poly->slopes.cols(); ++i) {
      const double len = poly->breakpoints[i + 1] - poly->breakpoints[i];
      total += 0.5 * len * (verts.col(i) + verts.col(i + 1));
    }
    return total;
  }
  for (int c = 0; c < dimension(); ++c)
    total(c) = quad::gauss_legendre_composite([&](double s) { return field_(s)(c); }, 0.0, period(), 256);
  return total;
}

}  // namespace relstring
