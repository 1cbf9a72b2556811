#pragma once
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bayesens {

inline constexpr double kDefaultClassEps = 1e-9;

struct BetLedger {
  std::uint64_t wins = 1;
  std::uint64_t losses = 0;

  friend bool operator==(const BetLedger&, const BetLedger&) = default;
};

struct EnsembleTotals {
  std::uint64_t total_wins = 0;
  std::uint64_t total_losses = 0;

  friend bool operator==(const EnsembleTotals&, const EnsembleTotals&) = default;
};

struct MicroState {
  std::uint32_t id = 0;
  BetLedger ledger;
  double posterior = 1.0;
};

struct BetOutcome {
  std::size_t winner = 0;
  std::size_t loser = 0;
};

struct MacroSnapshot {
  std::uint64_t step = 0;
  double mean_posterior = 0.0;
  double variance = 0.0;
  double skewness = 0.0;         // NaN when the population is degenerate
  double excess_kurtosis = 0.0;  // NaN when the population is degenerate
  double entropy = 0.0;
  std::uint64_t distinct_classes = 0;
  std::uint64_t heterogeneous_pairs = 0;
};

/// Probability that a microstate wins its next bet given its own ledger and the
/// ensemble totals. Likelihoods are the empirical frequencies wins/total_wins and
/// losses/total_losses (the latter 0 while nobody has lost); the equal marginals
/// P(win) = P(loss) = 0.5 cancel.
///
/// Throws std::invalid_argument for an empty ledger (wins = losses = 0) or for
/// totals that cannot contain the ledger.
double posterior_win(const BetLedger& ledger, const EnsembleTotals& totals);

/// C(n,k) + C(n-k,k) when n-k > 2, otherwise C(n,k). Throws std::overflow_error
/// when the result does not fit in 64 bits, std::invalid_argument unless n >= k >= 1.
std::uint64_t pair_combination_count(std::uint64_t n, std::uint64_t k);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// ln(omega) with k_B = 1. Throws std::domain_error for omega <= 0.
double boltzmann_entropy(double omega);

/// Classes obtained by sorting and splitting wherever consecutive values differ by more than eps.
std::uint64_t distinct_posterior_classes(std::span<const double> posteriors, double eps = kDefaultClassEps);

/// Unordered pairs (i, j) with |p_i - p_j| > eps. O(n log n).
std::uint64_t heterogeneous_pair_count(std::span<const double> posteriors, double eps = kDefaultClassEps);

/// Expected return of a bet between two microstates, buyer positive and seller negative.
double pair_expected_return(double p_buyer, double p_seller);

/// Closed population of microstates sharing one set of totals.
/// Posteriors are always consistent with the current totals.
class Ensemble {
public:
  /// Every microstate starts with one win and no losses, so all posteriors are 1.
  /// Throws std::invalid_argument for n < 2.
  explicit Ensemble(std::size_t n);

  std::size_t size() const noexcept { return states_.size(); }
  std::span<const MicroState> states() const noexcept { return states_; }
  const MicroState& operator[](std::size_t i) const { return states_.at(i); }
  const EnsembleTotals& totals() const noexcept { return totals_; }

  std::vector<double> posteriors() const;

  /// Settles a batch of bets, then recomputes every posterior from the new totals.
  /// Throws std::invalid_argument for a self-bet or an out-of-range index.
  void apply_bets(std::span<const BetOutcome> bets);

private:
  void refresh_posteriors();

  std::vector<MicroState> states_;
  EnsembleTotals totals_;
};

/// Recomputes every posterior and summarizes the population.
/// entropy = ln(max(1, heterogeneous pairs)).
MacroSnapshot macro_snapshot(const Ensemble& ensemble, std::uint64_t step, double eps = kDefaultClassEps);

MacroSnapshot summarize_posteriors(std::span<const double> posteriors, std::uint64_t step,
                                   double eps = kDefaultClassEps);

} // namespace bayesens
