#include "bayesens/dissipative.hpp"

#include "bayesens/conservative.hpp"
#include "bayesens/errors.hpp"
#include "bayesens/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace bayesens {

namespace {

// Stream id reserved for injection/removal draws; grain ids never reach it.
constexpr std::uint64_t kFlowStream = std::numeric_limits<std::uint64_t>::max();

// Runs task(i) for i in [0, n) on up to `workers` threads. Each index is
// processed by exactly one thread; callers only touch per-index state.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) task(i);
    });
}

} // namespace

std::string to_string(RemovalPolicy policy) {
  switch (policy) {
    case RemovalPolicy::oldest: return "oldest";
    case RemovalPolicy::random: return "random";
    case RemovalPolicy::closest_to_equilibrium: return "closest-to-equilibrium";
  }
  return "oldest";
}

RemovalPolicy parse_removal_policy(const std::string& text) {
  if (text == "oldest") return RemovalPolicy::oldest;
  if (text == "random") return RemovalPolicy::random;
  if (text == "closest-to-equilibrium") return RemovalPolicy::closest_to_equilibrium;
  throw ConfigError("unknown removal policy '" + text + "' (expected oldest, random or closest-to-equilibrium)");
}

void DissipativeConfig::validate() const {
  if (grain_sizes.empty()) throw ConfigError("dissipative.grain_sizes must not be empty");
  for (auto s : grain_sizes)
    if (s < 2) throw ConfigError("dissipative.grain_sizes entries must be >= 2");
  auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_prob(bets_fraction)) throw ConfigError("dissipative.bets_fraction must lie in [0, 1]");
  if (!is_prob(injection_prob)) throw ConfigError("dissipative.injection_prob must lie in [0, 1]");
  if (!is_prob(removal_prob)) throw ConfigError("dissipative.removal_prob must lie in [0, 1]");
  if (injection_size_min < 2 || injection_size_max < injection_size_min)
    throw ConfigError("dissipative.injection_size_min/max must satisfy 2 <= min <= max");
  if (!(eps_eq > 0.0)) throw ConfigError("dissipative.eps_eq must be positive");
  if (sustain < 1) throw ConfigError("dissipative.sustain must be >= 1");
  if (bins < 1) throw ConfigError("dissipative.bins must be >= 1");
  if (!(eps_class > 0.0)) throw ConfigError("dissipative.eps_class must be positive");
  if (smoothing_window < 1) throw ConfigError("dissipative.smoothing_window must be >= 1");
  if (workers < 1) throw ConfigError("dissipative.workers must be >= 1");
}

std::size_t DissipativeConfig::bets_for(std::size_t grain_size) const {
  if (bets_per_step > 0) return std::min(bets_per_step, grain_size / 2);
  return static_cast<std::size_t>(std::floor(bets_fraction * static_cast<double>(grain_size) / 2.0));
}

std::vector<double> GrainTrajectory::mean_posteriors() const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.mean_posterior);
  return out;
}

DissipativeState init_grains(std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("init_grains: empty size list");
  DissipativeState state;
  for (auto size : sizes) state.grains.push_back({state.next_id++, Ensemble(size), 0});
  return state;
}

void step_dissipative(DissipativeState& state, const DissipativeConfig& config) {
  const std::uint64_t step = ++state.step;

  parallel_for(state.grains.size(), config.workers, [&](std::size_t i) {
    CoarseGrain& grain = state.grains[i];
    const std::size_t bets = config.bets_for(grain.size());
    if (bets == 0) return;
    Rng rng = Rng::derive(config.seed, grain.id, step);
    step_conservative(grain.ensemble, bets, rng);
  });

  Rng flow = Rng::derive(config.seed, kFlowStream, step);
  if (config.injection_prob > 0.0 && flow.uniform() < config.injection_prob) {
    const std::size_t span = config.injection_size_max - config.injection_size_min + 1;
    const std::size_t size = config.injection_size_min + static_cast<std::size_t>(flow.below(span));
    state.grains.push_back({state.next_id++, Ensemble(size), step});
  }
  if (config.removal_prob > 0.0 && flow.uniform() < config.removal_prob && state.grains.size() > 1) {
    std::size_t victim = 0;
    switch (config.removal_policy) {
      case RemovalPolicy::oldest:
        victim = 0;
        break;
      case RemovalPolicy::random:
        victim = static_cast<std::size_t>(flow.below(state.grains.size()));
        break;
      case RemovalPolicy::closest_to_equilibrium: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < state.grains.size(); ++i) {
          const auto p = state.grains[i].ensemble.posteriors();
          double mean = 0.0;
          for (double v : p) mean += v;
          mean /= static_cast<double>(p.size());
          const double distance = std::abs(mean - 0.5);
          if (distance < best) {
            best = distance;
            victim = i;
          }
        }
        break;
      }
    }
    state.grains.erase(state.grains.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

Histogram posterior_histogram(std::span<const double> posteriors, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("posterior_histogram: need at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double p : posteriors) {
    auto b = static_cast<std::size_t>(p * static_cast<double>(bins));
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

PooledSnapshot superposed_distribution(const DissipativeState& state, std::size_t bins, double eps,
                                       std::size_t workers) {
  if (state.grains.empty()) throw std::invalid_argument("superposed_distribution: no living grain");
  PooledSnapshot out;
  out.step = state.step;
  out.grains.resize(state.grains.size());
  parallel_for(state.grains.size(), workers, [&](std::size_t i) {
    const CoarseGrain& g = state.grains[i];
    out.grains[i] = {g.id, g.size(), g.birth_step, macro_snapshot(g.ensemble, state.step, eps)};
  });

  std::vector<double> pooled;
  for (const auto& g : state.grains) {
    const auto p = g.ensemble.posteriors();
    pooled.insert(pooled.end(), p.begin(), p.end());
  }
  out.population = pooled.size();
  out.pooled = summarize_posteriors(pooled, state.step, eps);
  out.degenerate = out.pooled.variance == 0.0;
  out.histogram = posterior_histogram(pooled, bins);
  return out;
}

std::optional<std::uint64_t> convergence_time(std::span<const double> mean_posteriors, double eps,
                                              std::size_t sustain) {
  if (!(eps > 0.0) || sustain < 1) throw std::invalid_argument("convergence_time: need eps > 0 and sustain >= 1");
  std::size_t run = 0;
  for (std::size_t t = 0; t < mean_posteriors.size(); ++t) {
    run = std::abs(mean_posteriors[t] - 0.5) < eps ? run + 1 : 0;
    if (run == sustain) return t + 1 - sustain;
  }
  return std::nullopt;
}

DissipativeRun run_dissipative(const DissipativeConfig& config) {
  config.validate();
  DissipativeState state = init_grains(config.grain_sizes);
  DissipativeRun run;

  auto record = [&] {
    PooledSnapshot snap = superposed_distribution(state, config.bins, config.eps_class, config.workers);
    std::vector<bool> alive(run.grains.size(), false);
    for (const auto& g : snap.grains) {
      if (g.id >= run.grains.size()) {
        run.grains.resize(g.id + 1);
        alive.resize(g.id + 1, false);
      }
      GrainTrajectory& traj = run.grains[g.id];
      if (traj.snapshots.empty()) {
        traj.id = g.id;
        traj.size = g.size;
        traj.birth_step = g.birth_step;
      }
      traj.snapshots.push_back(g.snapshot);
      alive[g.id] = true;
    }
    for (std::size_t id = 0; id < run.grains.size(); ++id)
      if (!alive[id] && !run.grains[id].removed_step && !run.grains[id].snapshots.empty())
        run.grains[id].removed_step = state.step;
    run.pooled.push_back(std::move(snap));
  };

  run.pooled.reserve(config.steps + 1);
  record();
  for (std::uint64_t s = 0; s < config.steps; ++s) {
    step_dissipative(state, config);
    record();
  }
  return run;
}

} // namespace bayesens
