#pragma once
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bayesens/market_core.hpp"
#include "bayesens/rng.hpp"

namespace bayesens {

struct ConservativeConfig {
  std::size_t n_microstates = 50;
  std::size_t bets_per_step = 1;
  std::uint64_t steps = 5000;
  std::uint64_t seed = 1;
  std::size_t smoothing_window = 25;
  double eps_class = kDefaultClassEps;
  bool record_microstates = false;

  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const ConservativeConfig&, const ConservativeConfig&) = default;
};

struct MicroStateRecord {
  std::uint64_t step = 0;
  std::uint32_t id = 0;
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  double posterior = 0.0;
};

/// One snapshot per step including the initial state, so snapshots.size() == steps + 1.
struct Trajectory {
  std::vector<MacroSnapshot> snapshots;
  std::vector<double> smoothed_mean_posterior;
  std::vector<EnsembleTotals> totals;
  std::vector<MicroStateRecord> per_microstate;  // filled only when requested
};

using IndexPair = std::pair<std::size_t, std::size_t>;

// Forced bets for one step, in the order they are settled.
using ForcedStep = std::vector<BetOutcome>;

Ensemble init_ensemble(std::size_t n);

/// Uniformly random disjoint unordered pairs from a partial Fisher-Yates shuffle
/// of {0, ..., n-1}. Requires 2 * bets <= n.
std::vector<IndexPair> draw_pairing(std::size_t n, std::size_t bets, Rng& rng);

/// Fair coin; the first index wins on heads. Rejects self-bets.
BetOutcome resolve_bet(const IndexPair& pair, Rng& rng);

/// Draws a pairing, settles every bet and refreshes posteriors. Returns the settled bets.
std::vector<BetOutcome> step_conservative(Ensemble& ensemble, std::size_t bets, Rng& rng);

/// Each step's randomness comes from Rng::derive(seed, 0, step), step counted from 1.
Trajectory run_conservative(const ConservativeConfig& config);

/// Replays an explicit bet schedule from the initial state of n microstates.
Trajectory replay_schedule(std::size_t n, std::span<const ForcedStep> schedule,
                           std::size_t smoothing_window = 1, double eps = kDefaultClassEps,
                           bool record_microstates = true);

/// Trailing moving average; the first window-1 entries average the available prefix.
std::vector<double> smooth_series(std::span<const double> values, std::size_t window);

} // namespace bayesens
