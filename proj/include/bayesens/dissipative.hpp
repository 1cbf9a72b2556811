#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayesens/market_core.hpp"

namespace bayesens {

enum class RemovalPolicy { oldest, random, closest_to_equilibrium };

std::string to_string(RemovalPolicy policy);
RemovalPolicy parse_removal_policy(const std::string& text);  // throws ConfigError

struct DissipativeConfig {
  std::vector<std::size_t> grain_sizes{750, 225, 150, 425};
  std::uint64_t steps = 3000;
  std::uint64_t seed = 1;
  // Per-capita betting: each grain settles floor(bets_fraction * size / 2) bets per step.
  double bets_fraction = 0.5;
  // When non-zero, every grain settles exactly this many bets per step instead
  // (clamped to size/2), i.e. an equal absolute rate across grains.
  std::size_t bets_per_step = 0;
  double injection_prob = 0.0;
  std::size_t injection_size_min = 50;
  std::size_t injection_size_max = 500;
  double removal_prob = 0.0;
  RemovalPolicy removal_policy = RemovalPolicy::oldest;
  double eps_eq = 0.05;
  std::size_t sustain = 50;
  std::size_t bins = 50;
  double eps_class = kDefaultClassEps;
  std::size_t smoothing_window = 25;
  std::size_t workers = 1;
  // Histogram files every this many steps; 0 emits only the final step.
  std::uint64_t histogram_every = 0;

  void validate() const;  // throws ConfigError
  std::size_t bets_for(std::size_t grain_size) const;
  friend bool operator==(const DissipativeConfig&, const DissipativeConfig&) = default;
};

struct CoarseGrain {
  std::uint32_t id = 0;
  Ensemble ensemble;
  std::uint64_t birth_step = 0;

  std::size_t size() const noexcept { return ensemble.size(); }
};

struct DissipativeState {
  std::vector<CoarseGrain> grains;  // ordered by id, i.e. by age
  std::uint64_t step = 0;
  std::uint32_t next_id = 0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges over [0, 1]
  std::vector<std::uint64_t> counts;
};

struct GrainSummary {
  std::uint32_t id = 0;
  std::size_t size = 0;
  std::uint64_t birth_step = 0;
  MacroSnapshot snapshot;
};

struct PooledSnapshot {
  std::uint64_t step = 0;
  std::uint64_t population = 0;
  MacroSnapshot pooled;  // moments and entropy of the pooled posterior population
  bool degenerate = false;
  Histogram histogram;
  std::vector<GrainSummary> grains;
};

struct GrainTrajectory {
  std::uint32_t id = 0;
  std::size_t size = 0;
  std::uint64_t birth_step = 0;
  std::optional<std::uint64_t> removed_step;
  std::vector<MacroSnapshot> snapshots;  // snapshot.step is the global step

  std::vector<double> mean_posteriors() const;
};

struct DissipativeRun {
  std::vector<GrainTrajectory> grains;  // indexed by grain id
  std::vector<PooledSnapshot> pooled;   // one per step including step 0
};

/// One fresh grain per size, every ledger at one win and no losses. Throws std::invalid_argument for an
/// empty list or any size below 2.
DissipativeState init_grains(std::span<const std::size_t> sizes);

/// Advances one step: grain-internal bets, then injection, then removal.
/// Grain g draws from Rng::derive(seed, g, step); injection and removal draw from
/// a separate flow stream, so results do not depend on the worker count.
void step_dissipative(DissipativeState& state, const DissipativeConfig& config);

Histogram posterior_histogram(std::span<const double> posteriors, std::size_t bins);

/// Pools the posteriors of every living grain. Requires at least one grain.
PooledSnapshot superposed_distribution(const DissipativeState& state, std::size_t bins,
                                       double eps = kDefaultClassEps, std::size_t workers = 1);

/// First index s with |series[t] - 0.5| < eps for every t in [s, s + sustain);
/// nullopt when no full window qualifies.
std::optional<std::uint64_t> convergence_time(std::span<const double> mean_posteriors, double eps,
                                              std::size_t sustain);

DissipativeRun run_dissipative(const DissipativeConfig& config);

} // namespace bayesens
