#include "bayesens/rng.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace bayesens {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(step + 0x8cb92ba72f3d8dd7ULL));
  return Rng(h);
}

double Rng::uniform() {
  return boost::random::uniform_01<double>{}(engine_);
}

std::uint64_t Rng::below(std::uint64_t n) {
  return boost::random::uniform_int_distribution<std::uint64_t>{0, n - 1}(engine_);
}

bool Rng::coin() { return (engine_() >> 63) != 0; }

double Rng::normal() {
  return boost::random::normal_distribution<double>{0.0, 1.0}(engine_);
}

double Rng::gamma(double shape) {
  return boost::random::gamma_distribution<double>{shape, 1.0}(engine_);
}

} // namespace bayesens
