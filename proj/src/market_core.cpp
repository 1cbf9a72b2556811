#include "bayesens/market_core.hpp"

#include "bayesens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bayesens {

namespace {
__extension__ using u128 = unsigned __int128;
}

double posterior_win(const BetLedger& ledger, const EnsembleTotals& totals) {
  if (ledger.wins == 0 && ledger.losses == 0)
    throw std::invalid_argument("posterior_win: ledger has neither wins nor losses");
  if (totals.total_wins == 0 || ledger.wins > totals.total_wins || ledger.losses > totals.total_losses)
    throw std::invalid_argument("posterior_win: totals inconsistent with ledger");

  const double win_likelihood = static_cast<double>(ledger.wins) / static_cast<double>(totals.total_wins);
  const double loss_likelihood =
      totals.total_losses == 0 ? 0.0
                               : static_cast<double>(ledger.losses) / static_cast<double>(totals.total_losses);
  return win_likelihood / (win_likelihood + loss_likelihood);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
    if (result > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t pair_combination_count(std::uint64_t n, std::uint64_t k) {
  if (k < 1 || n < k)
    throw std::invalid_argument("pair_combination_count: need n >= k >= 1");
  const std::uint64_t base = binomial(n, k);
  if (n - k <= 2) return base;
  const std::uint64_t extra = binomial(n - k, k);
  if (base > std::numeric_limits<std::uint64_t>::max() - extra)
    throw std::overflow_error("pair_combination_count: sum does not fit in 64 bits");
  return base + extra;
}

double boltzmann_entropy(double omega) {
  if (!(omega > 0.0))
    throw std::domain_error("boltzmann_entropy: omega must be positive");
  return std::log(omega);
}

std::uint64_t distinct_posterior_classes(std::span<const double> posteriors, double eps) {
  if (posteriors.empty()) return 0;
  std::vector<double> sorted(posteriors.begin(), posteriors.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t classes = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] > eps) ++classes;
  return classes;
}

std::uint64_t heterogeneous_pair_count(std::span<const double> posteriors, double eps) {
  std::vector<double> sorted(posteriors.begin(), posteriors.end());
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t n = sorted.size();
  std::uint64_t close_pairs = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (j < i + 1) j = i + 1;
    while (j < sorted.size() && sorted[j] - sorted[i] <= eps) ++j;
    close_pairs += j - i - 1;
  }
  return n * (n - 1) / 2 - close_pairs;
}

double pair_expected_return(double p_buyer, double p_seller) { return p_buyer - p_seller; }

Ensemble::Ensemble(std::size_t n) {
  if (n < 2)
    throw std::invalid_argument("Ensemble: need at least 2 microstates, got " + std::to_string(n));
  states_.resize(n);
  for (std::size_t i = 0; i < n; ++i) states_[i].id = static_cast<std::uint32_t>(i);
  totals_ = {n, 0};
  refresh_posteriors();
}

std::vector<double> Ensemble::posteriors() const {
  std::vector<double> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(s.posterior);
  return out;
}

void Ensemble::apply_bets(std::span<const BetOutcome> bets) {
  for (const auto& bet : bets) {
    if (bet.winner == bet.loser)
      throw std::invalid_argument("Ensemble: a microstate cannot bet against itself");
    if (bet.winner >= states_.size() || bet.loser >= states_.size())
      throw std::invalid_argument("Ensemble: bet index out of range");
  }
  for (const auto& bet : bets) {
    ++states_[bet.winner].ledger.wins;
    ++states_[bet.loser].ledger.losses;
  }
  totals_.total_wins += bets.size();
  totals_.total_losses += bets.size();
  refresh_posteriors();
}

void Ensemble::refresh_posteriors() {
  for (auto& s : states_) s.posterior = posterior_win(s.ledger, totals_);
}

MacroSnapshot summarize_posteriors(std::span<const double> posteriors, std::uint64_t step, double eps) {
  const Moments m = population_moments(posteriors);
  MacroSnapshot snap;
  snap.step = step;
  snap.mean_posterior = m.mean;
  snap.variance = m.variance;
  snap.skewness = m.skewness;
  snap.excess_kurtosis = m.excess_kurtosis;
  snap.distinct_classes = distinct_posterior_classes(posteriors, eps);
  snap.heterogeneous_pairs = heterogeneous_pair_count(posteriors, eps);
  snap.entropy = boltzmann_entropy(static_cast<double>(std::max<std::uint64_t>(1, snap.heterogeneous_pairs)));
  return snap;
}

MacroSnapshot macro_snapshot(const Ensemble& ensemble, std::uint64_t step, double eps) {
  std::vector<double> recomputed;
  recomputed.reserve(ensemble.size());
  for (const auto& s : ensemble.states()) recomputed.push_back(posterior_win(s.ledger, ensemble.totals()));
  return summarize_posteriors(recomputed, step, eps);
}

} // namespace bayesens
