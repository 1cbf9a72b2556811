// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Lines starting with "  info" are diagnostics and never affect the verdict.

#include "bayesens/cli.hpp"
#include "bayesens/conservative.hpp"
#include "bayesens/dissipative.hpp"
#include "bayesens/inference.hpp"
#include "bayesens/market_core.hpp"
#include "bayesens/rng.hpp"
#include "bayesens/stats.hpp"
#include "bayesens/superstat.hpp"
#include "scratch_dir.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace bayesens;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
int passes = 0;

void verdict(int id, bool ok, const std::string& what) {
  fmt::print("criterion {:>2}: {}  {}\n", id, ok ? "PASS" : "FAIL", what);
  (ok ? passes : failures)++;
  std::fflush(stdout);
}

template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
  fmt::print("  info  {}\n", fmt::format(f, std::forward<Args>(args)...));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

// Pearson correlation of the average ranks; NaN when either side is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------- criterion 1

enum { A, B, C, D, E };

struct PrintedTable {
  std::vector<std::uint64_t> wins, losses;
  std::vector<std::string> posteriors;  // as printed, so the printed precision is known
};

// Step 1 .. step 7 as printed.
const std::vector<PrintedTable> kPrinted{
    {{1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, {"1", "1", "1", "1", "1"}},
    {{1, 2, 1, 1, 1}, {1, 0, 0, 0, 0}, {"0.5", "1", "1", "1", "1"}},
    {{1, 2, 2, 2, 1}, {2, 0, 0, 0, 1}, {"0.16", "1", "1", "1", "0.27"}},
    {{2, 2, 3, 2, 1}, {2, 1, 0, 1, 1}, {"0.33", "0.5", "1", "0.5", "0.33"}},
    {{2, 2, 3, 3, 2}, {3, 2, 0, 1, 1}, {"0.28", "0.37", "1", "0.6", "0.54"}},
    {{2, 2, 3, 4, 3}, {4, 2, 1, 1, 1}, {"0.24", "0.39", "0.66", "0.72", "0.66"}},
    {{2, 3, 3, 5, 3}, {5, 2, 1, 1, 2}, {"0.22", "0.51", "0.67", "0.77", "0.51"}},
};

// Half a unit in the last printed decimal place.
double print_tolerance(const std::string& s) {
  const auto dot = s.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  return 0.5 * std::pow(10.0, -decimals);
}

void criterion_golden_tables() {
  const auto t0 = Clock::now();
  const std::vector<ForcedStep> schedule{
      {{B, A}}, {{C, A}, {D, E}}, {{A, B}, {C, D}}, {{D, A}, {E, B}}, {{D, A}, {E, C}}, {{B, A}, {D, E}},
  };
  const Trajectory t = replay_schedule(5, schedule);

  std::size_t integer_mismatches = 0, cells = 0, within = 0, strict_within = 0;
  std::vector<std::string> notes;
  for (std::size_t step = 0; step < kPrinted.size(); ++step) {
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& rec = t.per_microstate[step * 5 + i];
      if (rec.wins != kPrinted[step].wins[i] || rec.losses != kPrinted[step].losses[i]) ++integer_mismatches;
    }
  }
  // Posterior cells of steps 3..7; cells fixed at 1 by construction are not counted.
  for (std::size_t step = 2; step < kPrinted.size(); ++step) {
    for (std::size_t i = 0; i < 5; ++i) {
      const std::string& printed = kPrinted[step].posteriors[i];
      if (printed == "1") {
        if (t.per_microstate[step * 5 + i].posterior != 1.0) ++integer_mismatches;
        continue;
      }
      const double computed = t.per_microstate[step * 5 + i].posterior;
      const double err = std::abs(computed - std::stod(printed));
      ++cells;
      if (err <= print_tolerance(printed) + 1e-12) ++within;
      if (err <= 0.005 + 1e-12) ++strict_within;
      else
        notes.push_back(fmt::format("step {} {}: computed {:.4f}, printed {} ({} decimal)", step + 1,
                                    static_cast<char>('A' + i), computed, printed,
                                    print_tolerance(printed) > 0.01 ? "one" : "two"));
    }
  }
  // Step-2 A cell: the ledger (1 win, 1 loss, totals 6/1) gives 1/7; the table prints 0.5.
  const double step2_a = t.per_microstate[5 + A].posterior;
  const bool step2_ok = std::abs(step2_a - 1.0 / 7.0) < 1e-15;
  const double runtime = seconds_since(t0);

  const bool ok = integer_mismatches == 0 && cells == 20 && strict_within == cells && step2_ok && runtime < 1.0;
  verdict(1, ok,
          fmt::format("golden tables: {} win/loss mismatches over 7 tables, {}/{} posterior cells within +-0.005, "
                      "step-2 A = {:.4f} (asserted computed value), {:.3f} s",
                      integer_mismatches, strict_within, cells, step2_a, runtime));
  info("documented deviation: step-2 A is printed 0.5 (row mean 0.9) but the update rule gives 1/7 = 0.1429 "
       "(row mean {:.4f})", t.snapshots[1].mean_posterior);
  for (const auto& n : notes) info("outside +-0.005: {}", n);
  info("{}/{} cells agree to half a unit of their own printed last digit", within, cells);
}

// ---------------------------------------------------------- criteria 2 and 3

void criteria_conservative() {
  const auto t0 = Clock::now();
  const std::size_t n = 50;
  const double entropy_cap = std::log(binomial(n, 2));
  int in_band = 0;
  bool entropy_capped = true;
  std::size_t conservation_breaks = 0, checked_steps = 0;
  std::vector<double> initial, final_entropy, tails;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ConservativeConfig cfg;
    cfg.n_microstates = n;
    cfg.steps = 5000;
    cfg.seed = seed;
    const Trajectory t = run_conservative(cfg);
    const std::size_t from = t.snapshots.size() - cfg.steps / 10;
    double tail = 0.0;
    for (std::size_t i = from; i < t.snapshots.size(); ++i) tail += t.snapshots[i].mean_posterior;
    tail /= static_cast<double>(t.snapshots.size() - from);
    tails.push_back(tail);
    in_band += tail >= 0.45 && tail <= 0.55;
    initial.push_back(t.snapshots.front().entropy);
    final_entropy.push_back(t.snapshots.back().entropy);
    for (const auto& s : t.snapshots) entropy_capped &= s.entropy <= entropy_cap;
    for (const auto& tot : t.totals) {
      ++checked_steps;
      if (tot.total_wins - tot.total_losses != n) ++conservation_breaks;
    }
  }
  const double runtime = seconds_since(t0);
  const bool ok2 = in_band >= 18 && median(final_entropy) > median(initial) && entropy_capped && runtime < 30.0;
  verdict(2, ok2,
          fmt::format("conservative equilibrium: final-decile mean posterior in [0.45, 0.55] for {}/20 seeds "
                      "(range {:.4f}..{:.4f}), median entropy {:.4f} -> {:.4f}, cap ln C(50,2) = {:.4f} {}, {:.1f} s",
                      in_band, *std::min_element(tails.begin(), tails.end()),
                      *std::max_element(tails.begin(), tails.end()), median(initial), median(final_entropy),
                      entropy_cap, entropy_capped ? "respected" : "EXCEEDED", runtime));
  verdict(3, conservation_breaks == 0 && checked_steps == 20 * 5001,
          fmt::format("conservation: total_wins - total_losses = N at {}/{} recorded steps", checked_steps -
                      conservation_breaks, checked_steps));
}

// ---------------------------------------------------------- criteria 4 and 5

struct DissipativeStudy {
  int positive_rho = 0;
  int strict_order = 0;
  int censored = 0;
  std::vector<std::vector<double>> times;  // per size, ascending size order
  std::vector<double> kurt_half;
  std::vector<double> kurt_all;
  std::vector<double> kurt_end;
  bool medians_ordered = false;
};

DissipativeStudy study_dissipative(std::size_t bets_per_step) {
  const std::vector<std::size_t> sizes{750, 225, 150, 425};
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] < sizes[b]; });

  DissipativeStudy st;
  st.times.resize(sizes.size());
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DissipativeConfig cfg;
    cfg.grain_sizes = sizes;
    cfg.steps = 3000;
    cfg.seed = seed;
    cfg.bets_per_step = bets_per_step;
    cfg.workers = 4;
    const DissipativeRun run = run_dissipative(cfg);

    std::vector<double> x, y;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      const auto t = convergence_time(run.grains[g].mean_posteriors(), 0.05, 50);
      // a grain that never settles is ranked after every one that does
      const double v = t ? static_cast<double>(*t) : static_cast<double>(cfg.steps + 1);
      st.censored += !t;
      x.push_back(static_cast<double>(sizes[g]));
      y.push_back(v);
    }
    const double rho = spearman(x, y);
    st.positive_rho += rho > 0.0;
    bool strict = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      st.times[k].push_back(y[order[k]]);
      if (k > 0) strict &= y[order[k]] > y[order[k - 1]];
    }
    st.strict_order += strict;

    auto sorted = y;
    std::sort(sorted.begin(), sorted.end());
    const auto kurt_at = [&](double step) {
      const auto idx = std::min(static_cast<std::size_t>(step), run.pooled.size() - 1);
      return run.pooled[idx].pooled.excess_kurtosis;
    };
    st.kurt_half.push_back(kurt_at(sorted[1]));
    st.kurt_all.push_back(kurt_at(sorted[3]));
    st.kurt_end.push_back(run.pooled.back().pooled.excess_kurtosis);
  }
  st.medians_ordered = true;
  for (std::size_t k = 1; k < st.times.size(); ++k)
    st.medians_ordered &= median(st.times[k]) > median(st.times[k - 1]);
  return st;
}

std::string medians_text(const DissipativeStudy& st) {
  const char* names[] = {"150", "225", "425", "750"};
  std::string s;
  for (std::size_t k = 0; k < st.times.size(); ++k)
    s += fmt::format("{}{}:{}", k ? " " : "", names[k], median(st.times[k]));
  return s;
}

int count_positive(const std::vector<double>& v) {
  return static_cast<int>(std::count_if(v.begin(), v.end(), [](double k) { return k > 0.0; }));
}

std::string range_text(const std::vector<double>& v) {
  return fmt::format("{:.3f}..{:.3f}", *std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()));
}

void criteria_dissipative() {
  const auto t0 = Clock::now();
  const DissipativeStudy per_capita = study_dissipative(0);
  const double runtime = seconds_since(t0);
  const bool ok4 = per_capita.positive_rho >= 14 && per_capita.medians_ordered && runtime < 300.0;
  verdict(4, ok4,
          fmt::format("dissipative size ordering at equal per-capita rate: Spearman rho > 0 in {}/20 seeds, strict "
                      "order in {}/20, median convergence step {} ({}), {:.1f} s",
                      per_capita.positive_rho, per_capita.strict_order, medians_text(per_capita),
                      per_capita.medians_ordered ? "ordered" : "not ordered", runtime));
  info("with a per-capita rate every grain reaches the 0.05 band after the same handful of steps whatever its size");

  const int fat = count_positive(per_capita.kurt_half);
  verdict(5, fat >= 16,
          fmt::format("fat tails when two of four grains have converged: pooled excess kurtosis > 0 in {}/20 seeds "
                      "(range {})",
                      fat, range_text(per_capita.kurt_half)));

  const auto t1 = Clock::now();
  const DissipativeStudy fixed = study_dissipative(1);
  info("same grains, one bet per grain per step: rho > 0 in {}/20, strict order in {}/20, median convergence step {} "
       "({:.1f} s)",
       fixed.positive_rho, fixed.strict_order, medians_text(fixed), seconds_since(t1));
  info("one bet per grain per step: pooled excess kurtosis > 0 in {}/20 when two grains have converged (range {}), "
       "{}/20 when all four have (range {}), {}/20 at step 3000 (range {})",
       count_positive(fixed.kurt_half), range_text(fixed.kurt_half), count_positive(fixed.kurt_all),
       range_text(fixed.kurt_all), count_positive(fixed.kurt_end), range_text(fixed.kurt_end));
  if (per_capita.censored + fixed.censored > 0)
    info("{} grain runs never converged and were ranked last", per_capita.censored + fixed.censored);
}

// ---------------------------------------------------------- criteria 6 and 7

void criterion_sqrt_tau() {
  MixingModel m;
  m.kind = MixingKind::constant;
  m.sigma0 = 1.0;
  const double s1 = std::sqrt(sample_moments(generate_returns(m, 100'000, 1, 601).samples).variance);
  bool ok = true;
  std::string detail;
  for (std::uint64_t tau : {4u, 16u, 64u}) {
    const double st = std::sqrt(sample_moments(generate_returns(m, 100'000, tau, 600 + tau, MixingSpeed::fast, 4).samples).variance);
    const double ratio = st / s1, target = std::sqrt(static_cast<double>(tau));
    ok &= std::abs(ratio / target - 1.0) < 0.05;
    detail += fmt::format(" tau={}: {:.4f} vs {:.0f}", tau, ratio, target);
  }
  verdict(6, ok, "sqrt(tau) dispersion, std ratio" + detail);
}

void criterion_student_t() {
  MixingModel m;
  m.kind = MixingKind::inverse_gamma;
  m.alpha = 4.0;
  m.beta = 4.0;
  const Moments mo = sample_moments(generate_returns(m, 1'000'000, 1, 7007, MixingSpeed::fast, 4).samples);
  verdict(7, std::abs(mo.excess_kurtosis - 1.5) <= 0.15,
          fmt::format("inverse-gamma(4, 4) variance mixing: excess kurtosis {:.4f} (Student-t nu = 8 gives 1.5)",
                      mo.excess_kurtosis));
}

// ---------------------------------------------------------------- criterion 8

double conjugate_evidence_oracle(double alpha, double beta, double mu, const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  const double n = static_cast<double>(xs.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi) + alpha * std::log(beta) + std::lgamma(alpha + n / 2) -
         std::lgamma(alpha) - (alpha + n / 2) * std::log(beta + s / 2);
}

// L1 distance between the normalized pointwise posterior on a 10^4-point grid and
// the conjugate inverse-gamma density. The grid is log-spaced around the peak of
// the unnormalized posterior, located by golden-section search.
double grid_l1(const InvGammaParams& prior, const DataSet& data) {
  const auto unnorm = [&](double u) {
    const double x = std::exp(u);
    return gaussian_variance_loglik(data, x) - (prior.alpha + 1) * u - prior.beta / x + u;
  };
  double lo = -40.0, hi = 40.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  while (hi - lo > 1e-9) {
    const double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
    if (unnorm(c) > unnorm(d)) hi = d; else lo = c;
  }
  const double peak_u = 0.5 * (lo + hi);
  const double a = peak_u - 15.0, b = peak_u + 30.0;
  const std::size_t m = 10'000;
  const double du = (b - a) / m;
  const InvGammaParams post = conjugate_variance_posterior(prior, data);
  std::vector<double> w(m), exact(m);
  double top = -INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = a + du * (static_cast<double>(i) + 0.5);
    w[i] = unnorm(u);
    top = std::max(top, w[i]);
    exact[i] = std::exp(post.alpha * std::log(post.beta) - std::lgamma(post.alpha) - (post.alpha + 1) * u -
                        post.beta / std::exp(u) + u);
  }
  double z = 0.0;
  for (double v : w) z += std::exp(v - top) * du;
  double l1 = 0.0;
  for (std::size_t i = 0; i < m; ++i) l1 += std::abs(std::exp(w[i] - top) / z - exact[i]) * du;
  return l1;
}

void criterion_conjugate() {
  const auto t0 = Clock::now();
  Rng rng(8080);
  double worst_l1 = 0.0, worst_rel = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const InvGammaParams prior{0.5 + 6.0 * rng.uniform(), 0.1 + 5.0 * rng.uniform()};
    const double mu = -1.0 + 2.0 * rng.uniform();
    const double sd = 0.2 + 3.0 * rng.uniform();
    DataSet data{std::vector<double>(1 + rng.below(50)), mu};
    for (double& x : data.samples) x = mu + sd * rng.normal();
    worst_l1 = std::max(worst_l1, grid_l1(prior, data));
  }
  for (int rep = 0; rep < 100; ++rep) {
    const double alpha = 0.5 + 6.0 * rng.uniform(), beta = 0.1 + 5.0 * rng.uniform();
    const double mu = -1.0 + 2.0 * rng.uniform();
    const double sd = 0.2 + 3.0 * rng.uniform();
    DataSet data{std::vector<double>(1 + rng.below(300)), mu};
    for (double& x : data.samples) x = mu + sd * rng.normal();
    const ModelSpec model{"m1", LikelihoodKind::gaussian_known_mean, {alpha, beta}, {}};
    const double q = log_evidence(model, data);
    worst_rel = std::max(worst_rel, std::abs(std::expm1(q - conjugate_evidence_oracle(alpha, beta, mu, data.samples))));
  }
  const double runtime = seconds_since(t0);
  verdict(8, worst_l1 < 1e-3 && worst_rel < 1e-6 && runtime < 60.0,
          fmt::format("conjugate correctness: worst grid L1 {:.2e} over 100 datasets, worst evidence relative error "
                      "{:.2e} over 100 cases, {:.2f} s",
                      worst_l1, worst_rel, runtime));
}

// ---------------------------------------------------------------- criterion 9

void criterion_model_comparison() {
  Rng rng(9090);
  double worst_sum = 0.0;
  const auto track = [&](const std::vector<ModelPosterior>& p) {
    double s = 0.0;
    for (const auto& m : p) s += m.posterior;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  };

  DataSet probe{std::vector<double>(200), 0.0};
  for (double& x : probe.samples) x = rng.normal();
  const std::vector<ModelSpec> twins{{"m1", LikelihoodKind::gaussian_known_mean, {3.0, 2.0}, {}},
                                     {"m2", LikelihoodKind::gaussian_known_mean, {3.0, 2.0}, {}}};
  const auto tw = model_posteriors(twins, std::vector<double>{0.5, 0.5}, probe);
  track(tw);
  const bool twins_ok = std::abs(tw[0].posterior - 0.5) < 1e-12 && std::abs(tw[1].posterior - 0.5) < 1e-12 &&
                        !select_model(tw).selected.has_value();

  // (a) exponential data: exponential-rate model against a zero-mean Gaussian model
  const std::vector<ModelSpec> kinds{{"m1", LikelihoodKind::exponential, {2.0, 2.0}, {}},
                                     {"m2", LikelihoodKind::gaussian_known_mean, {3.0, 2.0}, {}}};
  // (b) Gaussian data, two variance priors concentrated near 1 and near 4
  const std::vector<ModelSpec> scales{{"m1", LikelihoodKind::gaussian_known_mean, {20.0, 19.0}, {}},
                                      {"m2", LikelihoodKind::gaussian_known_mean, {20.0, 76.0}, {}}};
  const std::vector<double> even{0.5, 0.5};
  int wins_exp = 0, wins_small = 0, wins_large = 0;
  for (int rep = 0; rep < 100; ++rep) {
    DataSet e{std::vector<double>(500), 0.0};
    for (double& x : e.samples) x = -std::log(1.0 - rng.uniform()) / 1.5;
    const auto pe = model_posteriors(kinds, even, e);
    track(pe);
    wins_exp += pe[1].posterior > 0.0 ? bayes_ratio(pe[0].posterior, pe[1].posterior).ratio > 1.0 : pe[0].posterior > 0;

    DataSet s{std::vector<double>(500), 0.0}, l{std::vector<double>(500), 0.0};
    for (double& x : s.samples) x = 1.0 * rng.normal();
    for (double& x : l.samples) x = 2.0 * rng.normal();
    const auto ps = model_posteriors(scales, even, s);
    const auto pl = model_posteriors(scales, even, l);
    track(ps);
    track(pl);
    wins_small += bayes_ratio(ps[0].posterior, ps[1].posterior).ratio > 1.0;
    wins_large += bayes_ratio(pl[1].posterior, pl[0].posterior).ratio > 1.0;
  }
  const bool ok = worst_sum <= 1e-12 && twins_ok && wins_exp >= 95 && wins_small >= 95 && wins_large >= 95;
  verdict(9, ok,
          fmt::format("model comparison: worst |sum - 1| {:.1e}, identical models {}, generating model favoured in "
                      "{}/100 (exponential vs Gaussian), {}/100 (variance near 1), {}/100 (variance near 4) at n = 500",
                      worst_sum, twins_ok ? "0.5/0.5 tie" : "NOT tied", wins_exp, wins_small, wins_large));
}

// --------------------------------------------------------------- criterion 10

void criterion_determinism() {
  testing::ScratchDir dir;
  {
    Rng rng(10);
    std::ostringstream prices;
    prices << "t,price\n";
    double p = 100.0;
    for (int i = 0; i < 2000; ++i) {
      prices << i << "," << fmt::format("{}", p) << "\n";
      p *= std::exp(0.01 * rng.normal());
    }
    dir.write("prices.csv", prices.str());
  }
  const auto cfg = dir.write("run.ini", R"([dissipative]
histogram_every = 500
injection_prob = 0.01
removal_prob = 0.01
workers = 4
[superstat]
workers = 4
[inference]
models = gaussian, gaussian
model_prior_alpha = 3, 20
model_prior_beta = 0.0002, 0.002
model_weights = 0.5, 0.5
[io]
input = prices.csv
tau = 1
)").string();

  std::size_t files = 0, differing = 0;
  std::vector<std::string> failed_commands;
  for (const std::string cmd :
       {"sim-conservative", "sim-dissipative", "gen-returns", "ingest", "fit-variance", "compare-models"}) {
    std::string stdout_text[2];
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out, err;
      const auto target = dir / fmt::format("{}_{}", cmd, run);
      if (dispatch({cmd, "--config", cfg, "--out", target.string()}, out, err) != 0)
        failed_commands.push_back(cmd + ": " + err.str().substr(0, err.str().find_last_not_of('\n') + 1));
      stdout_text[run] = out.str();
    }
    differing += stdout_text[0] != stdout_text[1];
    for (const auto& e : std::filesystem::directory_iterator(dir / (cmd + "_0"))) {
      ++files;
      const auto twin = dir / (cmd + "_1") / e.path().filename();
      if (!std::filesystem::exists(twin) || testing::slurp(e.path()) != testing::slurp(twin)) ++differing;
    }
  }
  verdict(10, differing == 0 && failed_commands.empty() && files >= 12,
          fmt::format("determinism: 6 subcommands run twice, {} emitted files, {} differences, {} failed runs", files,
                      differing, failed_commands.size()));
  for (const auto& f : failed_commands) info("{}", f);
}

} // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    criterion_golden_tables();
    criteria_conservative();
    criteria_dissipative();
    criterion_sqrt_tau();
    criterion_student_t();
    criterion_conjugate();
    criterion_model_comparison();
    criterion_determinism();
  } catch (const std::exception& e) {
    fmt::print("acceptance aborted: {}\n", e.what());
    return 2;
  }
  fmt::print("summary: {} passed, {} failed ({:.1f} s)\n", passes, failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
