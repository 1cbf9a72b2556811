#pragma once
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bayesens/conservative.hpp"
#include "bayesens/dissipative.hpp"
#include "bayesens/inference.hpp"
#include "bayesens/superstat.hpp"

namespace bayesens {

// All emitters write UTF-8, comma-separated, LF-terminated files with a header
// row and locale-independent numbers. Failures throw DataError (Kind::io) naming the path.

/// Header: step,mean_posterior,smoothed_mean_posterior,variance,skewness,
/// excess_kurtosis,entropy,distinct_classes,heterogeneous_pairs. 12 significant digits.
void emit_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);
void emit_snapshot_csv(std::span<const MacroSnapshot> snapshots, std::span<const double> smoothed,
                       const std::filesystem::path& path);

void emit_microstates_csv(std::span<const MicroStateRecord> records, const std::filesystem::path& path);

/// Header: bin_left,bin_right,count; ascending bins.
void emit_histogram_csv(const Histogram& histogram, const std::filesystem::path& path);

/// Per-grain rows for every recorded step, ordered by step then grain id.
void emit_grains_csv(const DissipativeRun& run, const std::filesystem::path& path);

/// Header: i,y. Values use the shortest representation that round-trips exactly.
void emit_returns_csv(std::span<const double> returns, const std::filesystem::path& path);
std::vector<double> read_returns_csv(const std::filesystem::path& path);

/// Header: t,price with t = 0, 1, ...; shortest round-trip representation.
void emit_price_csv(std::span<const double> prices, const std::filesystem::path& path);

/// Y[i] = ln(price[i + tau] / price[i]) from a `t,price` or `date,price` file.
/// `t` must be strictly increasing numbers, `date` strictly increasing strings.
/// Throws DataError: malformed_row (with line number), nonpositive_price,
/// non_increasing_time, too_few_rows, io.
ReturnSeries ingest_price_csv(const std::filesystem::path& path, std::uint64_t tau);

struct FitRow {
  std::string quantity;
  double value = 0.0;
};
void emit_fit_csv(std::span<const FitRow> rows, const std::filesystem::path& path);

void emit_models_csv(std::span<const ModelSpec> models, std::span<const ModelPosterior> posteriors,
                     const std::filesystem::path& path);

/// 12 significant digits, "nan" for NaN.
std::string format_value(double v);

} // namespace bayesens
