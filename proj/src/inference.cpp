#include "bayesens/inference.hpp"

#include "bayesens/errors.hpp"
#include "bayesens/superstat.hpp"

#include <boost/math/distributions/inverse_gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace bayesens {

namespace {

constexpr double kTrimNats = 60.0;

double log_sum_exp(std::span<const double> xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Streaming log-sum-exp accumulator.
struct LogAccumulator {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x > max) {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    } else {
      sum += std::exp(x - max);
    }
  }
  double value() const { return max + std::log(sum); }
};

struct Sufficient {
  double n = 0.0;
  double sum = 0.0;      // sum of x
  double sq_dev = 0.0;   // sum of (x - mu)^2
};

Sufficient sufficient_stats(const DataSet& data) {
  Sufficient s;
  s.n = static_cast<double>(data.samples.size());
  for (double x : data.samples) {
    s.sum += x;
    s.sq_dev += (x - data.mu) * (x - data.mu);
  }
  return s;
}

} // namespace

void InvGammaParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw std::invalid_argument("inverse-gamma hyperparameters must be positive and finite");
}

void DataSet::validate() const {
  if (!std::isfinite(mu)) throw DataError(DataError::Kind::invalid_value, "known mean is not finite");
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!std::isfinite(samples[i]))
      throw DataError(DataError::Kind::invalid_value, "sample " + std::to_string(i) + " is not finite");
}

std::string to_string(LikelihoodKind kind) {
  return kind == LikelihoodKind::gaussian_known_mean ? "gaussian" : "exponential";
}

LikelihoodKind parse_likelihood_kind(const std::string& text) {
  if (text == "gaussian") return LikelihoodKind::gaussian_known_mean;
  if (text == "exponential") return LikelihoodKind::exponential;
  throw ConfigError("unknown likelihood kind '" + text + "' (expected gaussian or exponential)");
}

double gaussian_variance_loglik(const DataSet& data, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("gaussian_variance_loglik: sigma2 must be positive");
  if (data.samples.empty()) return 0.0;
  const Sufficient s = sufficient_stats(data);
  return -0.5 * s.n * std::log(2.0 * std::numbers::pi * sigma2) - s.sq_dev / (2.0 * sigma2);
}

double exponential_loglik(std::span<const double> data, double theta) {
  if (!(theta > 0.0)) throw std::domain_error("exponential_loglik: theta must be positive");
  double sum = 0.0;
  for (double x : data) {
    if (!(x > 0.0)) throw std::domain_error("exponential_loglik: samples must be positive");
    sum += x;
  }
  if (data.empty()) return 0.0;
  return static_cast<double>(data.size()) * std::log(theta) - theta * sum;
}

InvGammaParams conjugate_variance_posterior(const InvGammaParams& prior, const DataSet& data) {
  prior.validate();
  if (data.samples.empty()) return prior;
  const Sufficient s = sufficient_stats(data);
  return {prior.alpha + s.n / 2.0, prior.beta + s.sq_dev / 2.0};
}

double conjugate_log_evidence(const InvGammaParams& prior, const DataSet& data) {
  prior.validate();
  if (data.samples.empty()) return 0.0;
  const Sufficient s = sufficient_stats(data);
  const double a_post = prior.alpha + s.n / 2.0;
  const double b_post = prior.beta + s.sq_dev / 2.0;
  return -0.5 * s.n * std::log(2.0 * std::numbers::pi) + prior.alpha * std::log(prior.beta) +
         std::lgamma(a_post) - std::lgamma(prior.alpha) - a_post * std::log(b_post);
}

double log_evidence(const ModelSpec& model, const DataSet& data) {
  model.prior.validate();
  data.validate();
  if (data.samples.empty()) return 0.0;

  const Sufficient s = sufficient_stats(data);
  if (model.kind == LikelihoodKind::exponential)
    for (double x : data.samples)
      if (!(x > 0.0)) throw std::domain_error("log_evidence: exponential model requires positive samples");

  const double alpha = model.prior.alpha;
  const double beta = model.prior.beta;
  const double prior_norm = alpha * std::log(beta) - std::lgamma(alpha);
  const double log_2pi = std::log(2.0 * std::numbers::pi);

  // Integrand in u = ln(theta), including the Jacobian e^u.
  const std::function<double(double)> integrand = [&](double u) {
    const double theta = std::exp(u);
    const double log_prior = prior_norm - (alpha + 1.0) * u - beta / theta;
    const double log_lik = model.kind == LikelihoodKind::gaussian_known_mean
                               ? -0.5 * s.n * (log_2pi + u) - s.sq_dev / (2.0 * theta)
                               : s.n * u - theta * s.sum;
    return log_lik + log_prior + u;
  };

  const auto& q = model.quadrature;
  double a = 0.0, b = 0.0;
  if (q.domain_lo > 0.0 && q.domain_hi > q.domain_lo) {
    a = std::log(q.domain_lo);
    b = std::log(q.domain_hi);
  } else {
    double lo = beta * 1e-12, hi = beta * 1e12;
    try {
      const boost::math::inverse_gamma_distribution<double> prior(alpha, beta);
      lo = boost::math::quantile(prior, 1e-10);
      hi = boost::math::quantile(prior, 1.0 - 1e-10);
    } catch (const std::exception&) {
      // extreme shapes: keep the wide fallback bracket
    }
    a = std::log(std::max(lo, std::numeric_limits<double>::min()));
    b = std::log(std::min(hi, std::numeric_limits<double>::max()));
    const double peak = model.kind == LikelihoodKind::gaussian_known_mean
                            ? (s.sq_dev > 0.0 ? std::log(s.sq_dev / s.n) : a)
                            : std::log(s.n / s.sum);
    a = std::min(a, peak - 1.0);
    b = std::max(b, peak + 1.0);

    constexpr std::size_t kScan = 4096;
    auto scan = [&](double from, double to, double& best_u) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i <= kScan; ++i) {
        const double u = from + (to - from) * static_cast<double>(i) / kScan;
        const double f = integrand(u);
        if (f > best) {
          best = f;
          best_u = u;
        }
      }
      return best;
    };
    double u_max = a;
    double f_max = scan(a, b, u_max);
    // Widen until both edges sit well below the peak.
    for (int iter = 0; iter < 200 && integrand(a) > f_max - kTrimNats; ++iter) a -= 0.25 * (b - a) + 1.0;
    for (int iter = 0; iter < 200 && integrand(b) > f_max - kTrimNats; ++iter) b += 0.25 * (b - a) + 1.0;
    f_max = std::max(f_max, scan(a, b, u_max));
    // Trim to the region within kTrimNats of the peak, one scan cell of margin.
    const double cell = (b - a) / kScan;
    double lo_u = u_max, hi_u = u_max;
    while (lo_u > a && integrand(lo_u) > f_max - kTrimNats) lo_u -= cell;
    while (hi_u < b && integrand(hi_u) > f_max - kTrimNats) hi_u += cell;
    a = std::max(a, lo_u - cell);
    b = std::min(b, hi_u + cell);
  }

  std::size_t intervals = std::max<std::size_t>(q.initial_intervals, 2);
  double h = (b - a) / static_cast<double>(intervals);
  // Sum of f over interior nodes plus half-weighted end points, in log space.
  LogAccumulator ends;
  ends.add(integrand(a) + std::log(0.5));
  ends.add(integrand(b) + std::log(0.5));
  LogAccumulator interior;
  for (std::size_t i = 1; i < intervals; ++i) interior.add(integrand(a + h * static_cast<double>(i)));

  auto estimate = [&] {
    const double parts[] = {ends.value(), interior.value()};
    return log_sum_exp(parts) + std::log(h);
  };

  double previous = std::numeric_limits<double>::quiet_NaN();
  double current = estimate();
  for (std::size_t r = 0; r < q.max_refinements; ++r) {
    // Midpoints of the current intervals become new interior nodes.
    for (std::size_t i = 0; i < intervals; ++i) interior.add(integrand(a + h * (static_cast<double>(i) + 0.5)));
    intervals *= 2;
    h *= 0.5;
    previous = current;
    current = estimate();
    if (r >= 1 && std::abs(std::expm1(current - previous)) < q.rel_tol) return current;
  }
  throw ConvergenceError("log_evidence: quadrature for model '" + model.id + "' did not reach rel_tol after " +
                             std::to_string(q.max_refinements) + " refinements",
                         previous, current);
}

std::vector<double> posteriors_from_log_evidence(std::span<const double> log_evidences,
                                                 std::span<const double> priors) {
  if (log_evidences.empty()) throw std::invalid_argument("model comparison needs at least one model");
  if (log_evidences.size() != priors.size())
    throw std::invalid_argument("model comparison: one prior weight per model required");
  double total = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw std::invalid_argument("model prior weights must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("model prior weights must sum to 1");

  std::vector<double> weighted(log_evidences.size());
  for (std::size_t j = 0; j < weighted.size(); ++j)
    weighted[j] = priors[j] > 0.0 ? log_evidences[j] + std::log(priors[j])
                                  : -std::numeric_limits<double>::infinity();
  const double norm = log_sum_exp(weighted);
  if (!std::isfinite(norm)) throw std::domain_error("model comparison: every model has zero weighted evidence");
  std::vector<double> out(weighted.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::exp(weighted[j] - norm);
  return out;
}

std::vector<ModelPosterior> model_posteriors(std::span<const ModelSpec> models, std::span<const double> priors,
                                             const DataSet& data) {
  std::vector<double> log_ev;
  log_ev.reserve(models.size());
  for (const auto& m : models) log_ev.push_back(log_evidence(m, data));
  const auto post = posteriors_from_log_evidence(log_ev, priors);
  std::vector<ModelPosterior> out;
  out.reserve(models.size());
  for (std::size_t j = 0; j < models.size(); ++j) out.push_back({models[j].id, priors[j], log_ev[j], post[j]});
  return out;
}

BayesRatio bayes_ratio(double posterior_j, double posterior_k) {
  if (posterior_k == 0.0) throw std::domain_error("bayes_ratio: denominator posterior is zero");
  const double r = posterior_j / posterior_k;
  return {r, std::abs(r - 1.0) <= 1e-12};
}

ModelSelection select_model(std::span<const ModelPosterior> posteriors) {
  ModelSelection sel;
  if (posteriors.empty()) return sel;
  std::size_t best = 0;
  for (std::size_t j = 1; j < posteriors.size(); ++j)
    if (posteriors[j].posterior > posteriors[best].posterior) best = j;
  if (posteriors[best].posterior == 0.0) return sel;
  for (std::size_t j = 0; j < posteriors.size(); ++j)
    if (j == best || bayes_ratio(posteriors[j].posterior, posteriors[best].posterior).tie) sel.tied.push_back(j);
  if (sel.tied.size() == 1) {
    sel.selected = best;
    sel.tied.clear();
  }
  return sel;
}

} // namespace bayesens
