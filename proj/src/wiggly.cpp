#include "relstring/wiggly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "relstring/errors.hpp"
#include "relstring/quadrature.hpp"

namespace relstring {

namespace {

constexpr int kCellsPerPiece = 32;
constexpr double kSlopeSlack = 1e-14;

struct Bump {
  double lo;
  double hi;
  // (u - lo)^3 (hi - u)^3 and its first two derivatives.
  std::array<double, 3> operator()(double u) const {
    const double p = u - lo;
    const double q = hi - u;
    return {p * p * p * q * q * q, 3.0 * p * p * q * q * (q - p),
            6.0 * p * q * q * q - 18.0 * p * p * q * q + 6.0 * p * p * p * q};
  }
};

PiecewiseLinearData validated(std::vector<double> breakpoints, Points slopes, Vec origin) {
  for (Eigen::Index i = 0; i < slopes.cols(); ++i)
    if (slopes.col(i).norm() > 1.0 + kSlopeSlack)
      fail(ErrorCode::BadParams, "slope " + std::to_string(i) + " has |c| = " + std::to_string(slopes.col(i).norm()) + " > 1");
  return PiecewiseLinearData{std::move(breakpoints), std::move(slopes), std::move(origin)};
}

}  // namespace

PiecewiseLinearLoop::PiecewiseLinearLoop(std::vector<double> breakpoints, Points slopes, Vec origin)
    : data_(validated(std::move(breakpoints), std::move(slopes), std::move(origin))),
      loop_(PeriodicLoop::piecewise_linear(data_)) {}

double PiecewiseLinearLoop::min_segment() const {
  double m = period();
  for (std::size_t i = 0; i + 1 < data_.breakpoints.size(); ++i)
    m = std::min(m, data_.breakpoints[i + 1] - data_.breakpoints[i]);
  return m;
}

Vec normal_field(const Vec& c) {
  const double c2 = c.squaredNorm();
  if (c2 > 1.0 + 2.0 * kSlopeSlack) fail(ErrorCode::BadParams, "normal_field needs |c| <= 1");
  const double len = std::sqrt(std::max(0.0, 1.0 - c2));
  const auto n = c.size();
  if (len == 0.0) return Vec::Zero(n);
  const double cn = std::sqrt(c2);
  if (n == 2) {
    const Eigen::Vector2d dir = cn > 0.0 ? Eigen::Vector2d(rotate_ccw(c / cn)) : Eigen::Vector2d(0.0, 1.0);
    return len * dir;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec u = Vec::Unit(n, i);
    if (cn > 0.0) u -= (u.dot(c) / c2) * c;
    const double un = u.norm();
    if (un > 1e-8) return len * (u / un);
  }
  fail(ErrorCode::BadParams, "normal_field found no admissible direction");
}

PiecewiseLinearLoop zigzag(const PiecewiseLinearLoop& a, int k) {
  if (k < 2 || k % 2 != 0) fail(ErrorCode::OddK, "zig-zag density must be even and >= 2, got " + std::to_string(k));
  const int m = a.segments();
  const int n = a.dimension();
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(m * k + 1));
  Points slopes(n, m * k);
  for (int i = 0; i < m; ++i) {
    const double L0 = a.breakpoints()[i];
    const double L1 = a.breakpoints()[i + 1];
    const Vec c = a.slopes().col(i);
    const Vec d = normal_field(c);
    for (int j = 0; j < k; ++j) {
      bp.push_back(j == 0 ? L0 : L0 + (L1 - L0) * j / k);
      slopes.col(i * k + j) = (j % 2 == 0) ? Vec(c + d) : Vec(c - d);
    }
  }
  bp.push_back(a.period());
  return PiecewiseLinearLoop(std::move(bp), std::move(slopes), a.origin());
}

Eigen::Matrix<double, 2, 3> SmoothedCorner::local(double sigma) const {
  Eigen::Matrix<double, 2, 3> out;
  const double u = std::abs(sigma);
  const double sgn = sigma < 0.0 ? -1.0 : 1.0;
  if (u <= alpha) {
    const double a3 = alpha * alpha * alpha;
    const double s2 = sigma * sigma;
    out.col(0) << tau1 * sigma, tau2 * (-s2 * s2 / (8.0 * a3) + 3.0 * s2 / (4.0 * alpha) + 3.0 * alpha / 8.0);
    out.col(1) << tau1, tau2 * (-s2 * sigma / (2.0 * a3) + 3.0 * sigma / (2.0 * alpha));
    out.col(2) << 0.0, tau2 * (-3.0 * s2 / (2.0 * a3) + 3.0 / (2.0 * alpha));
    return out;
  }
  out.col(0) << tau1 * sigma, tau2 * u;
  out.col(1) << tau1, tau2 * sgn;
  out.col(2).setZero();
  if (u >= ell / 3.0) {
    const auto p = Bump{ell / 3.0, ell / 2.0}(u);
    // Outward normal of the leg the point sits on.
    const Eigen::Vector2d nrm = sigma > 0.0 ? Eigen::Vector2d(-tau2, tau1) : Eigen::Vector2d(tau2, tau1);
    out.col(0) += beta * p[0] * nrm;
    out.col(1) += sgn * beta * p[1] * nrm;
    out.col(2) += beta * p[2] * nrm;
  }
  return out;
}

double SmoothedCorner::speed(double sigma) const { return local(sigma).col(1).norm(); }

double SmoothedCorner::arc(double sigma) const {
  sigma = std::clamp(sigma, knots.front(), knots.back());
  auto it = std::upper_bound(knots.begin(), knots.end(), sigma);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - knots.begin()) - 1));
  if (i + 1 >= knots.size()) return cumulative.back();
  return cumulative[i] + quad::gauss_legendre([this](double s) { return speed(s); }, knots[i], sigma);
}

double SmoothedCorner::sigma_at(double q) const {
  q = std::clamp(q, 0.0, length);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), q);
  auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - cumulative.begin()) - 1));
  i = std::min(i, knots.size() - 2);
  const double lo = knots[i];
  const double hi = knots[i + 1];
  double sigma = lo + (q - cumulative[i]) / (cumulative[i + 1] - cumulative[i]) * (hi - lo);
  for (int iter = 0; iter < 30; ++iter) {
    const double f = arc(sigma) - q;
    if (std::abs(f) <= 4e-16 * std::max(1.0, length)) break;
    sigma = std::clamp(sigma - f / speed(sigma), lo, hi);
  }
  return sigma;
}

double SmoothedCorner::max_offset() const {
  return std::max(3.0 * alpha * tau2 / 8.0, beta * std::pow(ell / 12.0, 6));
}

SmoothedCorner solve_corner(double tau1, double tau2, double ell, double eta) {
  if (!(ell > 0.0) || !(eta > 0.0) || !(eta < ell / 3.0))
    fail(ErrorCode::BadParams, "smoothing needs ell > 0 and 0 < eta < ell/3");
  if (tau1 < 1e-8) fail(ErrorCode::ParamsInfeasible, "reversal corner (tau1 = 0) is outside the local frame");

  SmoothedCorner c;
  c.tau1 = tau1;
  c.tau2 = tau2;
  c.ell = ell;

  // Cap shortfall is linear in alpha: 2 alpha - cap length = alpha * (2 - cap_unit).
  const double cap_unit = quad::gauss_legendre_composite(
      [&](double u) {
        const double dy = tau2 * (-u * u * u / 2.0 + 1.5 * u);
        return std::sqrt(tau1 * tau1 + dy * dy);
      },
      -1.0, 1.0, 64);
  const Bump bump{ell / 3.0, ell / 2.0};
  const double peak = std::pow(ell / 12.0, 6);
  auto bump_excess = [&](double amplitude) {
    const double b = amplitude / peak;
    const double len = quad::gauss_legendre_composite(
        [&](double u) {
          const double dp = b * bump(u)[1];
          return std::sqrt(1.0 + dp * dp);
        },
        ell / 3.0, ell / 2.0, 64);
    return 2.0 * (len - ell / 6.0);
  };

  double alpha = eta / 4.0;
  const double amp_max = eta / 2.0;
  const double excess_max = bump_excess(amp_max);
  bool bracketed = false;
  for (int halving = 0; halving < 60; ++halving) {
    if (alpha * (2.0 - cap_unit) <= excess_max) {
      bracketed = true;
      break;
    }
    alpha *= 0.5;
  }
  if (!bracketed) fail(ErrorCode::ParamsInfeasible, "bump cannot balance the cap length");
  const double deficit = alpha * (2.0 - cap_unit);
  double lo = 0.0;
  double hi = amp_max;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (bump_excess(mid) < deficit) lo = mid; else hi = mid;
  }
  c.alpha = alpha;
  c.beta = 0.5 * (lo + hi) / peak;

  const std::array<double, 6> pieces = {-ell / 2.0, -ell / 3.0, -alpha, alpha, ell / 3.0, ell / 2.0};
  c.knots.clear();
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p)
    for (int j = 0; j < kCellsPerPiece; ++j)
      c.knots.push_back(pieces[p] + (pieces[p + 1] - pieces[p]) * j / kCellsPerPiece);
  c.knots.push_back(ell / 2.0);
  c.cumulative.assign(c.knots.size(), 0.0);
  for (std::size_t i = 0; i + 1 < c.knots.size(); ++i)
    c.cumulative[i + 1] =
        c.cumulative[i] + quad::gauss_legendre([&c](double s) { return c.speed(s); }, c.knots[i], c.knots[i + 1]);
  c.length = c.cumulative.back();
  if (std::abs(c.length - ell) > 1e-10 * ell)
    fail(ErrorCode::ParamsInfeasible, "window length " + std::to_string(c.length) + " does not balance ell");
  return c;
}

PeriodicLoop smooth_corners(const PiecewiseLinearLoop& z, const SmoothingParams& params) {
  const double ell = params.ell;
  const double eta = params.eta;
  if (!(ell > 0.0) || !(eta > 0.0) || !(eta < ell / 3.0))
    fail(ErrorCode::BadParams, "smoothing needs ell > 0 and 0 < eta < ell/3");
  if (!(ell < z.min_segment() / 3.0))
    fail(ErrorCode::BadParams, "ell must be below a third of the shortest segment");
  const int m = z.segments();
  for (int i = 0; i < m; ++i)
    if (std::abs(z.slopes().col(i).norm() - 1.0) > 1e-12)
      fail(ErrorCode::NotNormalized, "smooth_corners needs unit slopes (segment " + std::to_string(i) + ")");

  struct Window {
    Vec vertex;
    Points frame;  // n x 2: bisector, cross direction
    const SmoothedCorner* shape = nullptr;
  };
  auto shapes = std::make_shared<std::map<std::pair<double, double>, SmoothedCorner>>();
  auto windows = std::make_shared<std::vector<Window>>(static_cast<std::size_t>(m));
  const Points& verts = *z.loop().vertices();
  double total = z.period();
  for (int i = 0; i < m; ++i) {
    const Vec u_in = z.slopes().col((i + m - 1) % m);
    const Vec u_out = z.slopes().col(i);
    const double tau1 = 0.5 * (u_in + u_out).norm();
    const double tau2 = 0.5 * (u_out - u_in).norm();
    if (tau2 < 1e-12) continue;
    auto key = std::make_pair(tau1, tau2);
    auto it = shapes->find(key);
    if (it == shapes->end()) {
      it = shapes->emplace(key, solve_corner(tau1, tau2, ell, eta)).first;
      total += it->second.length - ell;
    } else {
      total += it->second.length - ell;
    }
    Window& w = (*windows)[static_cast<std::size_t>(i)];
    w.vertex = verts.col(i);
    w.frame.resize(z.dimension(), 2);
    w.frame.col(0) = (u_in + u_out) / (2.0 * tau1);
    w.frame.col(1) = (u_out - u_in) / (2.0 * tau2);
    w.shape = &it->second;
  }
  if (std::abs(total - z.period()) > 1e-8)
    fail(ErrorCode::ParamsInfeasible, "smoothed length drifted from the period by " + std::to_string(total - z.period()));

  const PiecewiseLinearData data{z.breakpoints(), z.slopes(), z.origin()};
  const PeriodicLoop base = z.loop();
  auto fn = [shapes, windows, data, base, ell, m](double s) -> Jet {
    const auto& bp = data.breakpoints;
    auto it = std::upper_bound(bp.begin(), bp.end(), s);
    const int seg = std::clamp(static_cast<int>(it - bp.begin()) - 1, 0, m - 1);
    const std::array<std::pair<int, double>, 2> candidates = {
        std::make_pair(seg, s - bp[static_cast<std::size_t>(seg)]),
        std::make_pair((seg + 1) % m, s - bp[static_cast<std::size_t>(seg + 1)])};
    for (const auto& [corner, r] : candidates) {
      const Window& w = (*windows)[static_cast<std::size_t>(corner)];
      if (!w.shape || std::abs(r) >= 0.5 * ell) continue;
      const SmoothedCorner& c = *w.shape;
      const double scale = c.length / ell;
      const double sigma = c.sigma_at((r + 0.5 * ell) * scale);
      const auto g = c.local(sigma);
      const Eigen::Vector2d d1 = g.col(1);
      const double sp = d1.norm();
      const Eigen::Vector2d tangent = d1 / sp;
      const Eigen::Vector2d d2 = g.col(2);
      const Eigen::Vector2d bend = (d2 - d2.dot(tangent) * tangent) / (sp * sp);
      return Jet{w.vertex + w.frame * Eigen::Vector2d(g.col(0)), scale * (w.frame * tangent),
                 scale * scale * (w.frame * bend)};
    }
    return base.jet(s);
  };
  return PeriodicLoop::analytic(z.period(), z.dimension(), std::move(fn));
}

DAlembertPair approximate_string(const PiecewiseLinearLoop& a, const PiecewiseLinearLoop& b,
                                 const SmoothingParams& params) {
  if (std::abs(a.period() - b.period()) > 1e-12 * a.period())
    fail(ErrorCode::InvalidLoop, "a and b must share the period");
  if (a.dimension() != b.dimension()) fail(ErrorCode::WrongDimension, "a and b differ in dimension");
  PeriodicLoop ak = smooth_corners(zigzag(a, params.k), params);
  PeriodicLoop bk = smooth_corners(zigzag(b, params.k), params);
  return DAlembertPair(std::move(ak), std::move(bk), ConstraintMode::UnitSpeed);
}

}  // namespace relstring
