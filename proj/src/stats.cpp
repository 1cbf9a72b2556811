#include "bayesens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayesens {

Moments population_moments(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("population_moments: empty population");

  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  Moments m;
  m.mean = sum / n;

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    m.mean = *lo;
    m.degenerate = true;
    m.skewness = std::numeric_limits<double>::quiet_NaN();
    m.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    return m;
  }

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

Moments sample_moments(std::span<const double> series) {
  if (series.size() < 4)
    throw std::invalid_argument("sample_moments: need at least 4 values");
  return population_moments(series);
}

} // namespace bayesens
