#include "bayesens/superstat.hpp"

#include "bayesens/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bayesens {

std::string to_string(MixingKind kind) {
  switch (kind) {
    case MixingKind::inverse_gamma: return "inverse-gamma";
    case MixingKind::generalized_inverse_gamma: return "generalized-inverse-gamma";
    case MixingKind::constant: return "constant";
  }
  return "constant";
}

std::string to_string(MixingSpeed speed) { return speed == MixingSpeed::fast ? "fast" : "slow"; }

MixingKind parse_mixing_kind(const std::string& text) {
  if (text == "inverse-gamma") return MixingKind::inverse_gamma;
  if (text == "generalized-inverse-gamma") return MixingKind::generalized_inverse_gamma;
  if (text == "constant") return MixingKind::constant;
  throw ConfigError("unknown mixing kind '" + text +
                    "' (expected inverse-gamma, generalized-inverse-gamma or constant)");
}

MixingSpeed parse_mixing_speed(const std::string& text) {
  if (text == "fast") return MixingSpeed::fast;
  if (text == "slow") return MixingSpeed::slow;
  throw ConfigError("unknown mixing speed '" + text + "' (expected fast or slow)");
}

void MixingModel::validate() const {
  switch (kind) {
    case MixingKind::constant:
      if (!(sigma0 > 0.0)) throw ConfigError("superstat.sigma0 must be positive");
      break;
    case MixingKind::generalized_inverse_gamma:
      if (!(gamma > 0.0)) throw ConfigError("superstat.gamma must be positive");
      [[fallthrough]];
    case MixingKind::inverse_gamma:
      if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("superstat.alpha and superstat.beta must be positive");
      break;
  }
}

double invgamma_logpdf(double x, double alpha, double beta) {
  if (!(x > 0.0)) throw std::domain_error("invgamma_logpdf: x must be positive");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("invgamma_logpdf: alpha and beta must be positive");
  return alpha * std::log(beta) - std::lgamma(alpha) - (alpha + 1.0) * std::log(x) - beta / x;
}

double giga_logpdf(double x, double alpha, double beta, double gamma) {
  if (!(x > 0.0)) throw std::domain_error("giga_logpdf: x must be positive");
  if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0))
    throw std::domain_error("giga_logpdf: alpha, beta and gamma must be positive");
  return std::log(gamma) + gamma * alpha * std::log(beta) - std::lgamma(alpha) -
         (gamma * alpha + 1.0) * std::log(x) - std::pow(beta / x, gamma);
}

double sample_invgamma(double alpha, double beta, Rng& rng) { return beta / rng.gamma(alpha); }

double sample_giga(double alpha, double beta, double gamma, Rng& rng) {
  const double g = rng.gamma(alpha);
  return beta / (gamma == 1.0 ? g : std::pow(g, 1.0 / gamma));
}

double sample_mixing(const MixingModel& model, Rng& rng) {
  switch (model.kind) {
    case MixingKind::inverse_gamma:
      return sample_invgamma(model.alpha, model.beta, rng);
    case MixingKind::generalized_inverse_gamma: {
      const double sigma = sample_giga(model.alpha, model.beta, model.gamma, rng);
      return sigma * sigma;
    }
    case MixingKind::constant:
      return model.sigma0 * model.sigma0;
  }
  return model.sigma0 * model.sigma0;
}

namespace {

void fill_chunk(const MixingModel& model, std::uint64_t tau, std::uint64_t seed, MixingSpeed speed,
                std::size_t chunk, std::span<double> out) {
  Rng rng = Rng::derive(seed, chunk, 0);
  for (double& y : out) {
    double sum = 0.0;
    if (speed == MixingSpeed::slow) {
      const double sigma = std::sqrt(sample_mixing(model, rng));
      for (std::uint64_t u = 0; u < tau; ++u) sum += sigma * rng.normal();
    } else {
      for (std::uint64_t u = 0; u < tau; ++u) sum += std::sqrt(sample_mixing(model, rng)) * rng.normal();
    }
    y = sum;
  }
}

} // namespace

ReturnSeries generate_returns(const MixingModel& model, std::size_t n, std::uint64_t tau, std::uint64_t seed,
                              MixingSpeed speed, std::size_t workers) {
  model.validate();
  if (n < 1) throw std::invalid_argument("generate_returns: n must be >= 1");
  if (tau < 1) throw std::invalid_argument("generate_returns: tau must be >= 1");

  ReturnSeries series{tau, std::vector<double>(n), seed};
  const std::size_t chunks = (n + kReturnChunk - 1) / kReturnChunk;
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kReturnChunk;
    const std::size_t len = std::min(kReturnChunk, n - begin);
    fill_chunk(model, tau, seed, speed, c, std::span<double>(series.samples).subspan(begin, len));
  };

  workers = std::clamp<std::size_t>(workers, 1, chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
  }
  return series;
}

} // namespace bayesens
