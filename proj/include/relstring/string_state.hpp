#ifndef RELSTRING_STRING_STATE_HPP
#define RELSTRING_STRING_STATE_HPP

#include "relstring/linalg.hpp"

namespace relstring {

/// One time slice of a string on a uniform periodic grid. First derivatives
/// are always present; the second derivatives are filled by evaluate_state()
/// and are left empty (zero columns) for states assembled from raw samples.
struct StringState {
  double t = 0.0;
  double period = 0.0;
  Vec grid;
  Points gamma;
  Points gamma_t;
  Points gamma_x;
  Points gamma_tt;
  Points gamma_tx;
  Points gamma_xx;

  int size() const { return static_cast<int>(grid.size()); }
  int dimension() const { return static_cast<int>(gamma.rows()); }
  double spacing() const { return period / size(); }
  bool has_second_derivatives() const { return gamma_xx.cols() == gamma.cols() && gamma.cols() > 0; }
};

/// Max deviation between gamma_x and the periodic central difference of
/// gamma, a consistency check that is O(h^2) for smooth slices.
double finite_difference_mismatch(const StringState& state);

}  // namespace relstring

#endif  // RELSTRING_STRING_STATE_HPP
