#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bayesens/conservative.hpp"
#include "bayesens/dissipative.hpp"
#include "bayesens/inference.hpp"
#include "bayesens/superstat.hpp"

namespace bayesens {

enum class InputKind { prices, returns };

struct SuperstatConfig {
  MixingModel model;
  std::size_t n = 100000;
  std::uint64_t tau = 1;
  std::uint64_t seed = 1;
  MixingSpeed speed = MixingSpeed::fast;
  std::size_t workers = 1;

  void validate() const;
  friend bool operator==(const SuperstatConfig&, const SuperstatConfig&) = default;
};

struct InferenceConfig {
  double mu = 0.0;
  InvGammaParams prior{3.0, 2.0};       // fit-variance prior over sigma^2
  std::vector<ModelSpec> models;         // compare-models candidates, ids m1..mK
  std::vector<double> model_weights;     // prior model probabilities
  QuadratureControls quadrature;

  InferenceConfig();
  void validate() const;
  friend bool operator==(const InferenceConfig&, const InferenceConfig&) = default;
};

struct IoConfig {
  std::string input;                     // data file for ingest / fit-variance / compare-models
  InputKind input_kind = InputKind::prices;
  std::uint64_t tau = 1;

  void validate() const;
  friend bool operator==(const IoConfig&, const IoConfig&) = default;
};

/// Sectioned key-value run configuration.
///
/// Grammar (one item per line, surrounding blanks ignored):
///   # comment  |  ; comment
///   [section]             one of conservative, dissipative, superstat, inference, io
///   key = value           keys mirror the fields above; lists are comma-separated
/// Every section is optional; omitted keys keep their defaults. Unknown sections
/// or keys, duplicates, and keys outside a section are errors.
struct RunConfig {
  ConservativeConfig conservative{.record_microstates = true};  // microstates.csv on by default
  DissipativeConfig dissipative;
  SuperstatConfig superstat;
  InferenceConfig inference;
  IoConfig io;

  void validate() const;  // throws ConfigError
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parse and validate; throws ConfigError naming `origin`.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

} // namespace bayesens
