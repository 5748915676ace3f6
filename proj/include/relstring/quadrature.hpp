#ifndef RELSTRING_QUADRATURE_HPP
#define RELSTRING_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <utility>

namespace relstring::quad {

// 10-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 10> kGaussNodes = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
inline constexpr std::array<double, 10> kGaussWeights = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

/// 10-point Gauss-Legendre on [a, b]; exact for polynomials of degree 19.
template <typename F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) sum += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  return sum * half;
}

/// Composite Gauss-Legendre with `panels` equal panels.
template <typename F>
double gauss_legendre_composite(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += gauss_legendre(f, a + p * h, a + (p + 1) * h);
  return sum;
}

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639, 0.949107912342758525, 0.864864423359769073, 0.741531185599394440,
    0.586087235467691130, 0.405845151377397167, 0.207784955007898468, 0.000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529225, 0.063092092629978553, 0.104790010322250184, 0.140653259715525919,
    0.169004726639267903, 0.190350578064785410, 0.204432940075298892, 0.209482141084727828};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168869693, 0.279705391489276668, 0.381830050505118945, 0.417959183673469388};

// G7-K15 pair on [a, b]; returns (kronrod estimate, |kronrod - gauss|).
template <typename F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = fc * kKronrodWeights[7];
  double gauss = fc * kGauss7Weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    kron += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * (f1 + f2);
  }
  return {kron * half, std::abs((kron - gauss) * half)};
}

template <typename F>
double adaptive(F& f, double a, double b, double tol, int depth) {
  const auto [whole, err] = gk15(f, a, b);
  if (err <= tol || depth <= 0) return whole;
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth - 1) + adaptive(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7-K15) with bisection refinement.
template <typename F>
double adaptive_gauss_kronrod(F&& f, double a, double b, double tol = 1e-13, int max_depth = 40) {
  return detail::adaptive(f, a, b, tol, max_depth);
}

}  // namespace relstring::quad

#endif  // RELSTRING_QUADRATURE_HPP
