#ifndef RELSTRING_CURVE_HPP
#define RELSTRING_CURVE_HPP

#include <functional>

#include "relstring/periodic_loop.hpp"

namespace relstring {

/// Length of one period, exact for polygons.
double total_length(const PeriodicLoop& curve);

/// Periodic cubic spline through `samples` (TooFewSamples below 8 nodes).
PeriodicLoop periodic_interpolate(const Points& samples, double period);

/// Unit-speed resampling of a regular loop on N nodes; the returned period is
/// the length of the curve.
PeriodicLoop arclength_reparametrize(const PeriodicLoop& curve, int N);

/// Minimum of |curve'| over a fine sampling (4N cells, Gauss nodes included).
double min_speed(const PeriodicLoop& curve, int N = 256);

/// Parameter values s_j at which the weighted length
///   sigma(s) = int_0^s weight(u) |curve'(u)| du
/// reaches j * total / N, plus the total weighted length.
struct WeightedSamples {
  Vec params;
  double total = 0.0;
};

using SpeedWeight = std::function<double(double s, const Jet& jet)>;

WeightedSamples weighted_reparametrize(const PeriodicLoop& curve, const SpeedWeight& weight, int N);

}  // namespace relstring

#endif  // RELSTRING_CURVE_HPP
