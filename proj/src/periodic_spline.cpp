#include "relstring/periodic_spline.hpp"

#include <algorithm>
#include <cmath>

#include "relstring/errors.hpp"

namespace relstring {

namespace {

// Solves the circulant system M_{i-1} + 4 M_i + M_{i+1} = rhs_i (rows are
// nodes, columns are coordinates) via Sherman-Morrison on a tridiagonal core.
Eigen::MatrixXd solve_cyclic_141(const Eigen::MatrixXd& rhs) {
  const Eigen::Index n = rhs.rows();
  const double gamma = -4.0;
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 4.0);
  diag(0) -= gamma;
  diag(n - 1) -= 1.0 / gamma;

  auto tridiag = [&](Eigen::MatrixXd r) {
    Eigen::VectorXd cprime(n);
    cprime(0) = 1.0 / diag(0);
    r.row(0) /= diag(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double m = diag(i) - cprime(i - 1);
      cprime(i) = 1.0 / m;
      r.row(i) = (r.row(i) - r.row(i - 1)) / m;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) r.row(i) -= cprime(i) * r.row(i + 1);
    return r;
  };

  Eigen::MatrixXd x = tridiag(rhs);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, 1);
  u(0, 0) = gamma;
  u(n - 1, 0) = 1.0;
  const Eigen::MatrixXd z = tridiag(u);
  const double denom = 1.0 + z(0, 0) + z(n - 1, 0) / gamma;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double fact = (x(0, c) + x(n - 1, c) / gamma) / denom;
    x.col(c) -= fact * z.col(0);
  }
  return x;
}

}  // namespace

PeriodicCubicSpline::PeriodicCubicSpline(Points samples, double period)
    : values_(std::move(samples)), period_(period) {
  const Eigen::Index n = values_.cols();
  if (n < 3) fail(ErrorCode::TooFewSamples, "periodic spline needs at least 3 nodes");
  h_ = period_ / static_cast<double>(n);
  Eigen::MatrixXd rhs(n, values_.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index prev = (i + n - 1) % n;
    const Eigen::Index next = (i + 1) % n;
    rhs.row(i) = (6.0 / (h_ * h_)) * (values_.col(next) - 2.0 * values_.col(i) + values_.col(prev)).transpose();
  }
  second_ = solve_cyclic_141(rhs).transpose();
}

PeriodicCubicSpline::Eval PeriodicCubicSpline::eval(double s) const {
  const Eigen::Index n = values_.cols();
  const double pos = wrap_periodic(s, period_) / h_;
  const Eigen::Index i = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), 0, n - 1);
  const double u = pos - static_cast<double>(i);
  const double v = 1.0 - u;
  const Eigen::Index j = (i + 1) % n;
  const auto yi = values_.col(i);
  const auto yj = values_.col(j);
  const auto mi = second_.col(i);
  const auto mj = second_.col(j);
  Eval out;
  out.value = v * yi + u * yj + (h_ * h_ / 6.0) * ((v * v * v - v) * mi + (u * u * u - u) * mj);
  out.d1 = (yj - yi) / h_ + (h_ / 6.0) * (-(3.0 * v * v - 1.0) * mi + (3.0 * u * u - 1.0) * mj);
  out.d2 = v * mi + u * mj;
  return out;
}


PeriodicQuinticHermite::PeriodicQuinticHermite(Points values, Points d1, Points d2, double period)
    : values_(std::move(values)), d1_(std::move(d1)), d2_(std::move(d2)), period_(period) {
  const Eigen::Index n = values_.cols();
  if (n < 3) fail(ErrorCode::TooFewSamples, "periodic Hermite spline needs at least 3 nodes");
  if (d1_.rows() != values_.rows() || d1_.cols() != n || d2_.rows() != values_.rows() || d2_.cols() != n)
    fail(ErrorCode::WrongDimension, "Hermite derivative data does not match the samples");
  h_ = period_ / static_cast<double>(n);
}

SplineEval PeriodicQuinticHermite::eval(double s) const {
  const Eigen::Index n = values_.cols();
  const double pos = wrap_periodic(s, period_) / h_;
  const Eigen::Index i = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), 0, n - 1);
  const Eigen::Index j = (i + 1) % n;
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

  // Basis for p0, m0, c0, c1, m1, p1 and its first two t-derivatives.
  const double b[6] = {1 - 10 * t3 + 15 * t4 - 6 * t5, t - 6 * t3 + 8 * t4 - 3 * t5,
                       0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5, 0.5 * t3 - t4 + 0.5 * t5,
                       -4 * t3 + 7 * t4 - 3 * t5, 10 * t3 - 15 * t4 + 6 * t5};
  const double db[6] = {-30 * t2 + 60 * t3 - 30 * t4, 1 - 18 * t2 + 32 * t3 - 15 * t4,
                        t - 4.5 * t2 + 6 * t3 - 2.5 * t4, 1.5 * t2 - 4 * t3 + 2.5 * t4,
                        -12 * t2 + 28 * t3 - 15 * t4, 30 * t2 - 60 * t3 + 30 * t4};
  const double ddb[6] = {-60 * t + 180 * t2 - 120 * t3, -36 * t + 96 * t2 - 60 * t3,
                         1 - 9 * t + 18 * t2 - 10 * t3, 3 * t - 12 * t2 + 10 * t3,
                         -24 * t + 84 * t2 - 60 * t3, 60 * t - 180 * t2 + 120 * t3};
  const Vec p0 = values_.col(i), p1 = values_.col(j);
  const Vec m0 = h_ * d1_.col(i), m1 = h_ * d1_.col(j);
  const Vec c0 = h_ * h_ * d2_.col(i), c1 = h_ * h_ * d2_.col(j);
  auto combine = [&](const double* w) { return Vec(w[0] * p0 + w[1] * m0 + w[2] * c0 + w[3] * c1 + w[4] * m1 + w[5] * p1); };
  return SplineEval{combine(b), combine(db) / h_, combine(ddb) / (h_ * h_)};
}

}  // namespace relstring
