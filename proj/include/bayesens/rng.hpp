#pragma once
#include <cstdint>
#include <random>

namespace bayesens {

/// Seedable random stream used by every simulation and generator.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
/// Distributions come from Boost.Random (fixed implementations, unlike the
/// implementation-defined <random> distributions), so a given seed yields the
/// same draws on every conforming platform.
///
/// Independent streams are derived with SplitMix64 mixing of
/// (seed, stream id, step), which lets parallel workers own pre-split streams
/// while replay stays independent of scheduling.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t step);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();                                // [0, 1)
  std::uint64_t below(std::uint64_t n);            // uniform on {0, ..., n-1}; n > 0
  bool coin();                                     // fair coin
  double normal();                                 // standard normal
  double gamma(double shape);                      // Gamma(shape, scale = 1)

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace bayesens
