#pragma once
#include <span>

namespace bayesens {

/// Population (biased) moments. When every value is identical the variance is
/// zero, `degenerate` is set and skewness / excess kurtosis are NaN.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool degenerate = false;
};

// Requires a non-empty population.
Moments population_moments(std::span<const double> values);

// Requires at least four values; zero variance is flagged, not thrown.
Moments sample_moments(std::span<const double> series);

} // namespace bayesens
