#pragma once
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bayesens {

/// Inverse-gamma hyperparameters, density proportional to x^(-(alpha+1)) exp(-beta/x).
struct InvGammaParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;  // throws std::invalid_argument
  friend bool operator==(const InvGammaParams&, const InvGammaParams&) = default;
};

struct DataSet {
  std::vector<double> samples;
  double mu = 0.0;  // known mean of the Gaussian model

  void validate() const;  // finite values only; throws DataError
};

enum class LikelihoodKind { gaussian_known_mean, exponential };

std::string to_string(LikelihoodKind kind);
LikelihoodKind parse_likelihood_kind(const std::string& text);  // throws ConfigError

/// Trapezoidal quadrature in log-parameter space. A zero bound means "choose
/// automatically": the prior's [1e-10, 1 - 1e-10] quantile range, widened until
/// the integrand has dropped 60 nats below its peak on both sides.
struct QuadratureControls {
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  std::size_t initial_intervals = 64;
  std::size_t max_refinements = 20;
  double rel_tol = 1e-8;

  friend bool operator==(const QuadratureControls&, const QuadratureControls&) = default;
};

/// The prior is over sigma^2 for the Gaussian model and over the rate theta for
/// the exponential model.
struct ModelSpec {
  std::string id;
  LikelihoodKind kind = LikelihoodKind::gaussian_known_mean;
  InvGammaParams prior;
  QuadratureControls quadrature;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct ModelPosterior {
  std::string id;
  double prior = 0.0;
  double log_evidence = 0.0;
  double posterior = 0.0;
};

struct BayesRatio {
  double ratio = 1.0;
  bool tie = false;
};

struct ModelSelection {
  std::optional<std::size_t> selected;  // empty when the top posterior is tied
  std::vector<std::size_t> tied;        // all indices sharing the top posterior when tied
};

/// -(n/2) ln(2 pi sigma2) - S / (2 sigma2), S = sum (x - mu)^2. Throws std::domain_error for sigma2 <= 0.
double gaussian_variance_loglik(const DataSet& data, double sigma2);

/// n ln(theta) - theta * sum(x). Throws std::domain_error for theta <= 0 or a nonpositive sample.
double exponential_loglik(std::span<const double> data, double theta);

/// InvGamma(alpha + n/2, beta + S/2).
InvGammaParams conjugate_variance_posterior(const InvGammaParams& prior, const DataSet& data);

/// Analytic log evidence of the Gaussian known-mean model under an inverse-gamma variance prior.
double conjugate_log_evidence(const InvGammaParams& prior, const DataSet& data);

/// log of the integral of L(theta) * prior(theta), by trapezoidal quadrature with
/// interval doubling until two successive estimates differ by less than rel_tol
/// (relative, on the evidence). Throws ConvergenceError carrying the last two
/// estimates otherwise, and std::domain_error when the data lie outside the
/// likelihood's sample space.
double log_evidence(const ModelSpec& model, const DataSet& data);

/// Posterior model probabilities from log evidences and prior weights, normalized
/// with log-sum-exp. Priors must sum to 1 within 1e-9.
std::vector<double> posteriors_from_log_evidence(std::span<const double> log_evidences,
                                                 std::span<const double> priors);

std::vector<ModelPosterior> model_posteriors(std::span<const ModelSpec> models, std::span<const double> priors,
                                             const DataSet& data);

/// posterior_j / posterior_k; tie flagged when the ratio equals 1 to 1e-12.
/// Throws std::domain_error when posterior_k is 0.
BayesRatio bayes_ratio(double posterior_j, double posterior_k);

/// The model whose ratio against every other exceeds 1. Ties are reported, never broken.
ModelSelection select_model(std::span<const ModelPosterior> posteriors);

} // namespace bayesens
