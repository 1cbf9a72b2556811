#include "bayesens/config.hpp"

#include "bayesens/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bayesens {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string_view rest = value;
  while (true) {
    const auto comma = rest.find(',');
    items.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (items.size() == 1 && items[0].empty()) items.clear();
  return items;
}

// Reads typed values from one section and remembers which keys were consumed.
class SectionReader {
public:
  SectionReader(std::string name, const pt::ptree* tree, std::string origin)
      : name_(std::move(name)), tree_(tree), origin_(std::move(origin)) {}

  template <typename T>
  void read(const std::string& key, T& target) {
    const auto raw = fetch(key);
    if (!raw) return;
    target = convert<T>(key, *raw);
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& target) {
    const auto raw = fetch(key);
    if (!raw) return;
    target.clear();
    for (const auto& item : split_list(*raw)) target.push_back(convert<T>(key, item));
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_)
      if (!used_.contains(key))
        throw ConfigError(origin_ + ": unknown key '" + key + "' in section [" + name_ + "]");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(origin_ + ": [" + name_ + "] " + key + ": " + what);
  }

private:
  std::optional<std::string> fetch(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  template <typename T>
  T convert(const std::string& key, const std::string& text) const {
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (text == "true") return true;
      if (text == "false") return false;
      fail(key, "expected true or false, got '" + text + "'");
    } else {
      T value{};
      const auto* end = text.data() + text.size();
      const auto [ptr, ec] = std::from_chars(text.data(), end, value);
      if (text.empty() || ec != std::errc{} || ptr != end)
        fail(key, "cannot parse '" + text + "' as a number");
      if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value)) fail(key, "value must be finite");
      return value;
    }
  }

  std::string name_;
  const pt::ptree* tree_;
  std::string origin_;
  std::set<std::string> used_;
};

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt::format("{}", values[i]);
  }
  return out;
}

std::string to_string(InputKind kind) { return kind == InputKind::prices ? "prices" : "returns"; }

InputKind parse_input_kind(const std::string& text) {
  if (text == "prices") return InputKind::prices;
  if (text == "returns") return InputKind::returns;
  throw ConfigError("unknown io.input_kind '" + text + "' (expected prices or returns)");
}

} // namespace

InferenceConfig::InferenceConfig() {
  models.push_back({"m1", LikelihoodKind::gaussian_known_mean, prior, quadrature});
  model_weights = {1.0};
}

void SuperstatConfig::validate() const {
  model.validate();
  if (n < 1) throw ConfigError("superstat.n must be >= 1");
  if (tau < 1) throw ConfigError("superstat.tau must be >= 1");
  if (workers < 1) throw ConfigError("superstat.workers must be >= 1");
}

void InferenceConfig::validate() const {
  auto check_prior = [](const InvGammaParams& p, const std::string& what) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw ConfigError(what + " hyperparameters must be positive");
  };
  check_prior(prior, "inference.prior");
  if (models.empty()) throw ConfigError("inference.models must list at least one model");
  if (model_weights.size() != models.size())
    throw ConfigError("inference.model_weights needs one weight per model");
  double total = 0.0;
  for (double w : model_weights) {
    if (w < 0.0) throw ConfigError("inference.model_weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("inference.model_weights must sum to 1");
  for (std::size_t j = 0; j < models.size(); ++j) {
    check_prior(models[j].prior, "inference model " + models[j].id);
    if (models[j].id != "m" + std::to_string(j + 1) || !(models[j].quadrature == quadrature))
      throw ConfigError("inference models must be named m1..mK and share the section's quadrature controls");
  }
  if (!(quadrature.rel_tol > 0.0)) throw ConfigError("inference.rel_tol must be positive");
  if (quadrature.initial_intervals < 2) throw ConfigError("inference.initial_intervals must be >= 2");
  if (quadrature.domain_lo < 0.0 || quadrature.domain_hi < 0.0 ||
      (quadrature.domain_hi > 0.0 && quadrature.domain_hi <= quadrature.domain_lo))
    throw ConfigError("inference.domain_lo/domain_hi must be 0 (automatic) or 0 < lo < hi");
}

void IoConfig::validate() const {
  if (tau < 1) throw ConfigError("io.tau must be >= 1");
}

void RunConfig::validate() const {
  conservative.validate();
  dissipative.validate();
  superstat.validate();
  inference.validate();
  io.validate();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  static const std::set<std::string> kSections{"conservative", "dissipative", "superstat", "inference", "io"};
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty())
      throw ConfigError(origin + ": key '" + name + "' appears outside any section");
    if (!kSections.contains(name)) throw ConfigError(origin + ": unknown section [" + name + "]");
  }
  auto section = [&](const std::string& name) {
    return SectionReader(name, tree.get_child_optional(name).get_ptr(), origin);
  };

  RunConfig cfg;
  {
    auto s = section("conservative");
    auto& c = cfg.conservative;
    s.read("n_microstates", c.n_microstates);
    s.read("bets_per_step", c.bets_per_step);
    s.read("steps", c.steps);
    s.read("seed", c.seed);
    s.read("smoothing_window", c.smoothing_window);
    s.read("eps_class", c.eps_class);
    s.read("record_microstates", c.record_microstates);
    s.reject_unknown();
  }
  {
    auto s = section("dissipative");
    auto& d = cfg.dissipative;
    s.read_list("grain_sizes", d.grain_sizes);
    s.read("steps", d.steps);
    s.read("seed", d.seed);
    s.read("bets_fraction", d.bets_fraction);
    s.read("bets_per_step", d.bets_per_step);
    s.read("injection_prob", d.injection_prob);
    s.read("injection_size_min", d.injection_size_min);
    s.read("injection_size_max", d.injection_size_max);
    s.read("removal_prob", d.removal_prob);
    std::string policy = to_string(d.removal_policy);
    s.read("removal_policy", policy);
    d.removal_policy = parse_removal_policy(policy);
    s.read("eps_eq", d.eps_eq);
    s.read("sustain", d.sustain);
    s.read("bins", d.bins);
    s.read("eps_class", d.eps_class);
    s.read("smoothing_window", d.smoothing_window);
    s.read("workers", d.workers);
    s.read("histogram_every", d.histogram_every);
    s.reject_unknown();
  }
  {
    auto s = section("superstat");
    auto& g = cfg.superstat;
    std::string kind = to_string(g.model.kind);
    s.read("kind", kind);
    g.model.kind = parse_mixing_kind(kind);
    s.read("alpha", g.model.alpha);
    s.read("beta", g.model.beta);
    s.read("gamma", g.model.gamma);
    s.read("sigma0", g.model.sigma0);
    s.read("n", g.n);
    s.read("tau", g.tau);
    s.read("seed", g.seed);
    std::string speed = to_string(g.speed);
    s.read("speed", speed);
    g.speed = parse_mixing_speed(speed);
    s.read("workers", g.workers);
    s.reject_unknown();
  }
  {
    auto s = section("inference");
    auto& inf = cfg.inference;
    s.read("mu", inf.mu);
    s.read("prior_alpha", inf.prior.alpha);
    s.read("prior_beta", inf.prior.beta);
    s.read("domain_lo", inf.quadrature.domain_lo);
    s.read("domain_hi", inf.quadrature.domain_hi);
    s.read("initial_intervals", inf.quadrature.initial_intervals);
    s.read("max_refinements", inf.quadrature.max_refinements);
    s.read("rel_tol", inf.quadrature.rel_tol);

    std::vector<std::string> kinds;
    std::vector<double> alphas, betas;
    for (const auto& m : inf.models) {
      kinds.push_back(to_string(m.kind));
      alphas.push_back(m.prior.alpha);
      betas.push_back(m.prior.beta);
    }
    s.read_list("models", kinds);
    s.read_list("model_prior_alpha", alphas);
    s.read_list("model_prior_beta", betas);
    s.read_list("model_weights", inf.model_weights);
    if (alphas.size() != kinds.size() || betas.size() != kinds.size())
      s.fail("models", "model_prior_alpha and model_prior_beta need one entry per model");
    inf.models.clear();
    for (std::size_t j = 0; j < kinds.size(); ++j)
      inf.models.push_back({"m" + std::to_string(j + 1), parse_likelihood_kind(kinds[j]), {alphas[j], betas[j]},
                            inf.quadrature});
    s.reject_unknown();
  }
  {
    auto s = section("io");
    auto& io = cfg.io;
    s.read("input", io.input);
    std::string kind = to_string(io.input_kind);
    s.read("input_kind", kind);
    io.input_kind = parse_input_kind(kind);
    s.read("tau", io.tau);
    s.reject_unknown();
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  auto num = [](auto v) { return fmt::format("{}", v); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };

  const auto& c = cfg.conservative;
  out += "[conservative]\n";
  line("n_microstates", num(c.n_microstates));
  line("bets_per_step", num(c.bets_per_step));
  line("steps", num(c.steps));
  line("seed", num(c.seed));
  line("smoothing_window", num(c.smoothing_window));
  line("eps_class", num(c.eps_class));
  line("record_microstates", flag(c.record_microstates));

  const auto& d = cfg.dissipative;
  out += "\n[dissipative]\n";
  line("grain_sizes", join(d.grain_sizes));
  line("steps", num(d.steps));
  line("seed", num(d.seed));
  line("bets_fraction", num(d.bets_fraction));
  line("bets_per_step", num(d.bets_per_step));
  line("injection_prob", num(d.injection_prob));
  line("injection_size_min", num(d.injection_size_min));
  line("injection_size_max", num(d.injection_size_max));
  line("removal_prob", num(d.removal_prob));
  line("removal_policy", to_string(d.removal_policy));
  line("eps_eq", num(d.eps_eq));
  line("sustain", num(d.sustain));
  line("bins", num(d.bins));
  line("eps_class", num(d.eps_class));
  line("smoothing_window", num(d.smoothing_window));
  line("workers", num(d.workers));
  line("histogram_every", num(d.histogram_every));

  const auto& g = cfg.superstat;
  out += "\n[superstat]\n";
  line("kind", to_string(g.model.kind));
  line("alpha", num(g.model.alpha));
  line("beta", num(g.model.beta));
  line("gamma", num(g.model.gamma));
  line("sigma0", num(g.model.sigma0));
  line("n", num(g.n));
  line("tau", num(g.tau));
  line("seed", num(g.seed));
  line("speed", to_string(g.speed));
  line("workers", num(g.workers));

  const auto& inf = cfg.inference;
  out += "\n[inference]\n";
  line("mu", num(inf.mu));
  line("prior_alpha", num(inf.prior.alpha));
  line("prior_beta", num(inf.prior.beta));
  std::vector<std::string> kinds;
  std::vector<double> alphas, betas;
  for (const auto& m : inf.models) {
    kinds.push_back(to_string(m.kind));
    alphas.push_back(m.prior.alpha);
    betas.push_back(m.prior.beta);
  }
  line("models", join(kinds));
  line("model_prior_alpha", join(alphas));
  line("model_prior_beta", join(betas));
  line("model_weights", join(inf.model_weights));
  line("domain_lo", num(inf.quadrature.domain_lo));
  line("domain_hi", num(inf.quadrature.domain_hi));
  line("initial_intervals", num(inf.quadrature.initial_intervals));
  line("max_refinements", num(inf.quadrature.max_refinements));
  line("rel_tol", num(inf.quadrature.rel_tol));

  out += "\n[io]\n";
  line("input", cfg.io.input);
  line("input_kind", to_string(cfg.io.input_kind));
  line("tau", num(cfg.io.tau));
  return out;
}

} // namespace bayesens
