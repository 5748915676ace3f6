#ifndef RELSTRING_LINALG_HPP
#define RELSTRING_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>

namespace relstring {

using Vec = Eigen::VectorXd;
// Point clouds are stored column-wise: one column per node, one row per
// spatial coordinate.
using Points = Eigen::MatrixXd;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Component of `v` orthogonal to the unit vector `tau`.
template <typename DerivedV, typename DerivedT>
auto normal_part(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedT>& tau) {
  return (v - v.dot(tau) * tau).eval();
}

/// Counter-clockwise rotation by pi/2 of a planar vector.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> rotate_ccw(const Eigen::MatrixBase<Derived>& v) {
  return {-v(1), v(0)};
}

/// z-component of the planar cross product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cross2(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a(0) * b(1) - a(1) * b(0);
}

/// Wraps s into [0, period).
template <typename Scalar>
Scalar wrap_periodic(Scalar s, Scalar period) {
  Scalar r = std::fmod(s, period);
  if (r < Scalar(0)) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Column-wise Euclidean norms of a point cloud.
template <typename Derived>
VecX<typename Derived::Scalar> column_norms(const Eigen::MatrixBase<Derived>& m) {
  return m.colwise().norm().transpose();
}

/// Column-wise inner products.
template <typename DerivedA, typename DerivedB>
VecX<typename DerivedA::Scalar> column_dots(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b).colwise().sum().transpose();
}

/// Uniform periodic grid x_j = j * period / n, j = 0..n-1.
inline Vec periodic_grid(double period, int n) {
  Vec x(n);
  const double h = period / n;
  for (int j = 0; j < n; ++j) x(j) = j * h;
  return x;
}

}  // namespace relstring

#endif  // RELSTRING_LINALG_HPP
