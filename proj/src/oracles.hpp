#ifndef RELSTRING_ORACLES_HPP
#define RELSTRING_ORACLES_HPP

// Reference values computed offline with mpmath at 40 significant digits.
namespace relstring::oracle {

// (1/2pi) int_0^{2pi} sqrt(5/4 + cos s) ds
inline constexpr double kNeuAlpha = 1.0635444099733649509923727813624556;
// Perimeter of the ellipse with semi-axes (2, 1): 8 E(m = 3/4)
inline constexpr double kEllipsePerimeter = 9.6884482205476761984285031963918294;
// pi^2 / 2
inline constexpr double kCircleQuarterArea = 4.9348022005446793094172454999380756;

}  // namespace relstring::oracle

#endif  // RELSTRING_ORACLES_HPP
