#include "bayesens/cli.hpp"

#include "bayesens/config.hpp"
#include "bayesens/csv_io.hpp"
#include "bayesens/errors.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>

namespace bayesens {

namespace fs = std::filesystem;

namespace {

struct Invocation {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(DataError::Kind::io, "cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

// Relative data paths are resolved against the config file's directory.
fs::path resolve_input(const Invocation& inv, const RunConfig& cfg) {
  if (cfg.io.input.empty()) throw ConfigError("io.input must name a data file for this subcommand");
  fs::path p(cfg.io.input);
  if (p.is_relative()) p = fs::path(inv.config_path).parent_path() / p;
  return p;
}

DataSet load_dataset(const Invocation& inv, const RunConfig& cfg) {
  const fs::path input = resolve_input(inv, cfg);
  DataSet data;
  data.mu = cfg.inference.mu;
  data.samples = cfg.io.input_kind == InputKind::prices ? ingest_price_csv(input, cfg.io.tau).samples
                                                        : read_returns_csv(input);
  data.validate();
  return data;
}

void run_sim_conservative(const Invocation& inv, RunConfig cfg, std::ostream& out) {
  if (inv.seed) cfg.conservative.seed = *inv.seed;
  const fs::path dir = prepare_out(inv.out_dir);
  const Trajectory traj = run_conservative(cfg.conservative);
  emit_trajectory_csv(traj, dir / "trajectory.csv");
  if (cfg.conservative.record_microstates) emit_microstates_csv(traj.per_microstate, dir / "microstates.csv");
  const auto& last = traj.snapshots.back();
  out << fmt::format("steps={} final_mean_posterior={} final_entropy={}\n", last.step,
                     format_value(last.mean_posterior), format_value(last.entropy));
}

void run_sim_dissipative(const Invocation& inv, RunConfig cfg, std::ostream& out) {
  auto& d = cfg.dissipative;
  if (inv.seed) d.seed = *inv.seed;
  const fs::path dir = prepare_out(inv.out_dir);
  const DissipativeRun run = run_dissipative(d);

  std::vector<MacroSnapshot> pooled;
  std::vector<double> means;
  for (const auto& p : run.pooled) {
    pooled.push_back(p.pooled);
    means.push_back(p.pooled.mean_posterior);
  }
  emit_snapshot_csv(pooled, smooth_series(means, d.smoothing_window), dir / "trajectory.csv");
  emit_grains_csv(run, dir / "grains.csv");
  for (const auto& p : run.pooled) {
    const bool periodic = d.histogram_every > 0 && p.step % d.histogram_every == 0;
    if (periodic || p.step == d.steps) emit_histogram_csv(p.histogram, dir / fmt::format("histogram_{}.csv", p.step));
  }

  out << "grain_id,size,birth_step,removed_step,convergence_step\n";
  for (const auto& g : run.grains) {
    if (g.snapshots.empty()) continue;
    const auto t = convergence_time(g.mean_posteriors(), d.eps_eq, d.sustain);
    out << fmt::format("{},{},{},{},{}\n", g.id, g.size, g.birth_step,
                       g.removed_step ? std::to_string(*g.removed_step) : std::string("-"),
                       t ? std::to_string(*t + g.birth_step) : std::string("not-converged"));
  }
}

void run_gen_returns(const Invocation& inv, RunConfig cfg, std::ostream& out) {
  auto& g = cfg.superstat;
  if (inv.seed) g.seed = *inv.seed;
  const fs::path dir = prepare_out(inv.out_dir);
  const ReturnSeries series = generate_returns(g.model, g.n, g.tau, g.seed, g.speed, g.workers);
  emit_returns_csv(series.samples, dir / "returns.csv");
  out << "n,tau,mean,variance,skewness,excess_kurtosis\n";
  if (series.samples.size() >= 4) {
    const Moments m = sample_moments(series.samples);
    out << fmt::format("{},{},{},{},{},{}\n", series.samples.size(), series.tau, format_value(m.mean),
                       format_value(m.variance), format_value(m.skewness), format_value(m.excess_kurtosis));
  }
}

void run_ingest(const Invocation& inv, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_out(inv.out_dir);
  const ReturnSeries series = ingest_price_csv(resolve_input(inv, cfg), cfg.io.tau);
  emit_returns_csv(series.samples, dir / "returns.csv");
  out << fmt::format("returns={} tau={}\n", series.samples.size(), series.tau);
}

void run_fit_variance(const Invocation& inv, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_out(inv.out_dir);
  const DataSet data = load_dataset(inv, cfg);
  const auto& prior = cfg.inference.prior;
  const InvGammaParams post = conjugate_variance_posterior(prior, data);
  const ModelSpec model{"variance", LikelihoodKind::gaussian_known_mean, prior, cfg.inference.quadrature};
  const double n = static_cast<double>(data.samples.size());
  double sq_dev = 0.0;
  for (double x : data.samples) sq_dev += (x - data.mu) * (x - data.mu);

  std::vector<FitRow> rows{
      {"n", n},
      {"mu", data.mu},
      {"sum_sq_dev", sq_dev},
      {"prior_alpha", prior.alpha},
      {"prior_beta", prior.beta},
      {"posterior_alpha", post.alpha},
      {"posterior_beta", post.beta},
      {"posterior_mode", post.beta / (post.alpha + 1.0)},
      {"log_evidence_closed_form", conjugate_log_evidence(prior, data)},
      {"log_evidence_quadrature", log_evidence(model, data)},
  };
  if (post.alpha > 1.0) rows.push_back({"posterior_mean", post.beta / (post.alpha - 1.0)});
  if (n > 0) rows.push_back({"mle_variance", sq_dev / n});
  emit_fit_csv(rows, dir / "fit.csv");
  out << fmt::format("posterior InvGamma(alpha={}, beta={})\n", format_value(post.alpha), format_value(post.beta));
}

void run_compare_models(const Invocation& inv, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_out(inv.out_dir);
  const DataSet data = load_dataset(inv, cfg);
  const auto& models = cfg.inference.models;
  const auto posts = model_posteriors(models, cfg.inference.model_weights, data);
  emit_models_csv(models, posts, dir / "models.csv");
  const ModelSelection sel = select_model(posts);
  if (sel.selected) {
    out << "selected " << posts[*sel.selected].id << "\n";
  } else {
    out << "tie between";
    for (auto j : sel.tied) out << " " << posts[j].id;
    out << "\n";
  }
}

using Handler = std::function<void(const Invocation&, RunConfig, std::ostream&)>;

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian ensemble betting simulations, superstatistics returns and conjugate variance inference",
               "bayesens"};
  app.set_version_flag("--version", std::string("bayesens ") + kVersion);
  app.require_subcommand(1);

  Invocation inv;
  const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> commands{
      {"sim-conservative", {"closed ensemble betting run (trajectory.csv, microstates.csv)", run_sim_conservative}},
      {"sim-dissipative", {"coarse-grained ensemble run (trajectory.csv, grains.csv, histogram_<step>.csv)",
                           run_sim_dissipative}},
      {"gen-returns", {"superstatistics log-return generator (returns.csv)", run_gen_returns}},
      {"fit-variance", {"conjugate inverse-gamma variance posterior (fit.csv)", run_fit_variance}},
      {"compare-models", {"posterior model probabilities and Bayes ratios (models.csv)", run_compare_models}},
      {"ingest", {"price CSV to log returns (returns.csv)", run_ingest}},
  };

  Handler selected;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->set_version_flag("--version", std::string("bayesens ") + kVersion);
    sub->add_option("--config", inv.config_path, "run configuration file")->required();
    sub->add_option("--out", inv.out_dir, "output directory")->required();
    sub->add_option("--seed", inv.seed, "override the seed of the section this subcommand uses");
    sub->callback([&selected, handler = entry.second] { selected = handler; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig cfg = load_config(inv.config_path);
    selected(inv, cfg, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical error: " << e.what() << " (last estimates " << format_value(e.previous_estimate()) << ", "
        << format_value(e.last_estimate()) << ")\n";
    return kExitNonConvergence;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

} // namespace bayesens
