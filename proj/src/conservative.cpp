#include "bayesens/conservative.hpp"

#include "bayesens/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bayesens {

void ConservativeConfig::validate() const {
  if (n_microstates < 2)
    throw ConfigError("conservative.n_microstates must be >= 2");
  if (bets_per_step < 1 || bets_per_step > n_microstates / 2)
    throw ConfigError("conservative.bets_per_step must lie in [1, n_microstates/2]");
  if (smoothing_window < 1)
    throw ConfigError("conservative.smoothing_window must be >= 1");
  if (!(eps_class > 0.0))
    throw ConfigError("conservative.eps_class must be positive");
}

Ensemble init_ensemble(std::size_t n) { return Ensemble(n); }

std::vector<IndexPair> draw_pairing(std::size_t n, std::size_t bets, Rng& rng) {
  if (2 * bets > n)
    throw std::invalid_argument("draw_pairing: " + std::to_string(bets) + " bets need more than " +
                                std::to_string(n) + " microstates");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < 2 * bets; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<IndexPair> pairs;
  pairs.reserve(bets);
  for (std::size_t b = 0; b < bets; ++b) pairs.emplace_back(idx[2 * b], idx[2 * b + 1]);
  return pairs;
}

BetOutcome resolve_bet(const IndexPair& pair, Rng& rng) {
  if (pair.first == pair.second)
    throw std::invalid_argument("resolve_bet: a microstate cannot bet against itself");
  return rng.coin() ? BetOutcome{pair.first, pair.second} : BetOutcome{pair.second, pair.first};
}

std::vector<BetOutcome> step_conservative(Ensemble& ensemble, std::size_t bets, Rng& rng) {
  const auto pairs = draw_pairing(ensemble.size(), bets, rng);
  std::vector<BetOutcome> outcomes;
  outcomes.reserve(pairs.size());
  for (const auto& p : pairs) outcomes.push_back(resolve_bet(p, rng));
  ensemble.apply_bets(outcomes);
  return outcomes;
}

namespace {

void record(const Ensemble& ensemble, std::uint64_t step, double eps, bool microstates, Trajectory& out) {
  out.snapshots.push_back(macro_snapshot(ensemble, step, eps));
  out.totals.push_back(ensemble.totals());
  if (!microstates) return;
  for (const auto& s : ensemble.states())
    out.per_microstate.push_back({step, s.id, s.ledger.wins, s.ledger.losses, s.posterior});
}

void finish(Trajectory& out, std::size_t window) {
  std::vector<double> means;
  means.reserve(out.snapshots.size());
  for (const auto& s : out.snapshots) means.push_back(s.mean_posterior);
  out.smoothed_mean_posterior = smooth_series(means, window);
}

} // namespace

Trajectory run_conservative(const ConservativeConfig& config) {
  config.validate();
  Ensemble ensemble = init_ensemble(config.n_microstates);
  Trajectory out;
  out.snapshots.reserve(config.steps + 1);
  record(ensemble, 0, config.eps_class, config.record_microstates, out);
  for (std::uint64_t step = 1; step <= config.steps; ++step) {
    Rng rng = Rng::derive(config.seed, 0, step);
    step_conservative(ensemble, config.bets_per_step, rng);
    record(ensemble, step, config.eps_class, config.record_microstates, out);
  }
  finish(out, config.smoothing_window);
  return out;
}

Trajectory replay_schedule(std::size_t n, std::span<const ForcedStep> schedule, std::size_t smoothing_window,
                           double eps, bool record_microstates) {
  Ensemble ensemble = init_ensemble(n);
  Trajectory out;
  record(ensemble, 0, eps, record_microstates, out);
  std::uint64_t step = 0;
  for (const auto& bets : schedule) {
    ensemble.apply_bets(bets);
    record(ensemble, ++step, eps, record_microstates, out);
  }
  finish(out, smoothing_window);
  return out;
}

std::vector<double> smooth_series(std::span<const double> values, std::size_t window) {
  if (window < 1) throw std::invalid_argument("smooth_series: window must be >= 1");
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += values[j];
    out.push_back(sum / static_cast<double>(i + 1 - first));
  }
  return out;
}

} // namespace bayesens
