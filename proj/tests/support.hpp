#ifndef RELSTRING_TESTS_SUPPORT_HPP
#define RELSTRING_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "relstring/errors.hpp"
#include "relstring/linalg.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Frozen mpmath values (40 digits).
inline constexpr double kNeuAlpha = 1.063544409973364950992372781362455641364;
inline constexpr double kEllipsePerimeter = 9.688448220547676198428503196391829411954;
// int_0^{2pi} sqrt(5/4 + cos 4s) ds
inline constexpr double kNeuLength5 = 6.682446610277629115064751162544732663096;

template <typename F>
relstring::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const relstring::StringError& e) {
    return e.code();
  }
  FAIL("expected a StringError");
  return relstring::ErrorCode::BadParams;
}

inline double max_abs(const relstring::Points& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing

#endif  // RELSTRING_TESTS_SUPPORT_HPP
