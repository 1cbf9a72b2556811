#pragma once
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bayesens/rng.hpp"
#include "bayesens/stats.hpp"

namespace bayesens {

enum class MixingKind { inverse_gamma, generalized_inverse_gamma, constant };

/// Fast mixing redraws the volatility every unit step; slow mixing draws one
/// volatility per tau-block (one per return sample).
enum class MixingSpeed { fast, slow };

std::string to_string(MixingKind kind);
std::string to_string(MixingSpeed speed);
MixingKind parse_mixing_kind(const std::string& text);    // throws ConfigError
MixingSpeed parse_mixing_speed(const std::string& text);  // throws ConfigError

/// Volatility-mixing distribution.
///
/// - inverse_gamma: the variance sigma^2 ~ InvGamma(alpha, beta).
/// - generalized_inverse_gamma: the volatility sigma ~ GIGa(alpha, beta, gamma) with
///   density gamma * beta^(gamma*alpha) / Gamma(alpha) * x^(-gamma*alpha-1) * exp(-(beta/x)^gamma);
///   gamma = 1 is exactly InvGamma(alpha, beta).
/// - constant: sigma = sigma0.
struct MixingModel {
  MixingKind kind = MixingKind::inverse_gamma;
  double alpha = 4.0;
  double beta = 4.0;
  double gamma = 1.0;
  double sigma0 = 1.0;

  void validate() const;  // throws ConfigError
  friend bool operator==(const MixingModel&, const MixingModel&) = default;
};

struct ReturnSeries {
  std::uint64_t tau = 1;
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

// Both throw std::domain_error for x <= 0 or nonpositive parameters.
double invgamma_logpdf(double x, double alpha, double beta);
double giga_logpdf(double x, double alpha, double beta, double gamma);

// Variates: beta / G and beta / G^(1/gamma) with G ~ Gamma(alpha, 1).
double sample_invgamma(double alpha, double beta, Rng& rng);
double sample_giga(double alpha, double beta, double gamma, Rng& rng);

/// One variance draw sigma^2 from the model.
double sample_mixing(const MixingModel& model, Rng& rng);

/// Each sample is the sum over tau unit steps of sigma_u * z_u with z_u standard
/// normal. Samples are produced in fixed-size chunks, chunk c drawing from
/// Rng::derive(seed, c, 0), so the output does not depend on `workers`.
ReturnSeries generate_returns(const MixingModel& model, std::size_t n, std::uint64_t tau, std::uint64_t seed,
                              MixingSpeed speed = MixingSpeed::fast, std::size_t workers = 1);

inline constexpr std::size_t kReturnChunk = 1 << 16;

} // namespace bayesens
