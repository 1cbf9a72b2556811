#include "bayesens/csv_io.hpp"

#include "bayesens/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bayesens {

namespace {

// Buffers the whole file and writes it in one go.
class CsvWriter {
public:
  explicit CsvWriter(std::filesystem::path path) : path_(std::move(path)) {}

  CsvWriter& line(const std::string& text) {
    buffer_ += text;
    buffer_ += '\n';
    return *this;
  }

  void commit() const {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(DataError::Kind::io, "cannot open '" + path_.string() + "' for writing");
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    out.close();
    if (!out) throw DataError(DataError::Kind::io, "failed writing '" + path_.string() + "'");
  }

private:
  std::filesystem::path path_;
  std::string buffer_;
};

std::string exact(double v) { return fmt::format("{}", v); }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& text, double& value) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return !text.empty() && ec == std::errc{} && ptr == end;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataError::Kind::io, "cannot open data file '" + path.string() + "'");
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

void emit_snapshot_csv(std::span<const MacroSnapshot> snapshots, std::span<const double> smoothed,
                       const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("step,mean_posterior,smoothed_mean_posterior,variance,skewness,excess_kurtosis,entropy,distinct_classes,"
         "heterogeneous_pairs");
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& s = snapshots[i];
    const double sm = i < smoothed.size() ? smoothed[i] : s.mean_posterior;
    w.line(fmt::format("{},{},{},{},{},{},{},{},{}", s.step, format_value(s.mean_posterior), format_value(sm),
                       format_value(s.variance), format_value(s.skewness), format_value(s.excess_kurtosis),
                       format_value(s.entropy), s.distinct_classes, s.heterogeneous_pairs));
  }
  w.commit();
}

void emit_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  emit_snapshot_csv(trajectory.snapshots, trajectory.smoothed_mean_posterior, path);
}

void emit_microstates_csv(std::span<const MicroStateRecord> records, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("step,id,wins,losses,posterior");
  for (const auto& r : records)
    w.line(fmt::format("{},{},{},{},{}", r.step, r.id, r.wins, r.losses, format_value(r.posterior)));
  w.commit();
}

void emit_histogram_csv(const Histogram& histogram, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("bin_left,bin_right,count");
  for (std::size_t b = 0; b < histogram.counts.size(); ++b)
    w.line(fmt::format("{},{},{}", format_value(histogram.edges[b]), format_value(histogram.edges[b + 1]),
                       histogram.counts[b]));
  w.commit();
}

void emit_grains_csv(const DissipativeRun& run, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("step,grain_id,size,birth_step,mean_posterior,variance,skewness,excess_kurtosis,entropy,distinct_classes,"
         "heterogeneous_pairs");
  for (const auto& pooled : run.pooled)
    for (const auto& g : pooled.grains) {
      const auto& s = g.snapshot;
      w.line(fmt::format("{},{},{},{},{},{},{},{},{},{},{}", pooled.step, g.id, g.size, g.birth_step,
                         format_value(s.mean_posterior), format_value(s.variance), format_value(s.skewness),
                         format_value(s.excess_kurtosis), format_value(s.entropy), s.distinct_classes,
                         s.heterogeneous_pairs));
    }
  w.commit();
}

void emit_returns_csv(std::span<const double> returns, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("i,y");
  for (std::size_t i = 0; i < returns.size(); ++i) w.line(fmt::format("{},{}", i, exact(returns[i])));
  w.commit();
}

std::vector<double> read_returns_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line))
    throw DataError(DataError::Kind::too_few_rows, path.string() + ": empty file");
  strip_cr(line);
  const auto header = split_fields(line);
  if (header.size() != 2 || header[1] != "y")
    throw DataError(DataError::Kind::malformed_row, path.string() + ":1: expected header 'i,y'");
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    double y = 0.0;
    if (fields.size() != 2 || !parse_double(fields[1], y) || !std::isfinite(y))
      throw DataError(DataError::Kind::malformed_row,
                      path.string() + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
    values.push_back(y);
  }
  return values;
}

void emit_price_csv(std::span<const double> prices, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("t,price");
  for (std::size_t i = 0; i < prices.size(); ++i) w.line(fmt::format("{},{}", i, exact(prices[i])));
  w.commit();
}

ReturnSeries ingest_price_csv(const std::filesystem::path& path, std::uint64_t tau) {
  if (tau < 1) throw std::invalid_argument("ingest_price_csv: tau must be >= 1");
  auto in = open_input(path);
  const std::string where = path.string();

  std::string line;
  if (!std::getline(in, line)) throw DataError(DataError::Kind::too_few_rows, where + ": empty file");
  strip_cr(line);
  const auto header = split_fields(line);
  if (header.size() != 2 || (header[0] != "t" && header[0] != "date") || header[1] != "price")
    throw DataError(DataError::Kind::malformed_row, where + ":1: expected header 't,price' or 'date,price'");
  const bool numeric_time = header[0] == "t";

  std::vector<double> prices;
  double last_t = 0.0;
  std::string last_date;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string at = where + ":" + std::to_string(line_no);
    const auto fields = split_fields(line);
    double price = 0.0;
    if (fields.size() != 2 || fields[0].empty() || !parse_double(fields[1], price) || !std::isfinite(price))
      throw DataError(DataError::Kind::malformed_row, at + ": malformed row '" + line + "'");
    if (numeric_time) {
      double t = 0.0;
      if (!parse_double(fields[0], t) || !std::isfinite(t))
        throw DataError(DataError::Kind::malformed_row, at + ": time index '" + fields[0] + "' is not a number");
      if (!prices.empty() && !(t > last_t))
        throw DataError(DataError::Kind::non_increasing_time, at + ": time index is not strictly increasing");
      last_t = t;
    } else {
      if (!prices.empty() && !(fields[0] > last_date))
        throw DataError(DataError::Kind::non_increasing_time, at + ": date is not strictly increasing");
      last_date = fields[0];
    }
    if (!(price > 0.0))
      throw DataError(DataError::Kind::nonpositive_price, at + ": price must be positive, got " + fields[1]);
    prices.push_back(price);
  }
  if (prices.size() < tau + 1)
    throw DataError(DataError::Kind::too_few_rows, where + ": need at least " + std::to_string(tau + 1) +
                                                       " price rows for tau = " + std::to_string(tau) + ", got " +
                                                       std::to_string(prices.size()));

  ReturnSeries series;
  series.tau = tau;
  series.samples.reserve(prices.size() - tau);
  for (std::size_t i = 0; i + tau < prices.size(); ++i) series.samples.push_back(std::log(prices[i + tau] / prices[i]));
  return series;
}

void emit_fit_csv(std::span<const FitRow> rows, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("quantity,value");
  for (const auto& r : rows) w.line(r.quantity + "," + exact(r.value));
  w.commit();
}

void emit_models_csv(std::span<const ModelSpec> models, std::span<const ModelPosterior> posteriors,
                     const std::filesystem::path& path) {
  CsvWriter w(path);
  w.line("model,kind,prior_weight,prior_alpha,prior_beta,log_evidence,posterior");
  for (std::size_t j = 0; j < posteriors.size(); ++j) {
    const auto& p = posteriors[j];
    w.line(fmt::format("{},{},{},{},{},{},{}", p.id, to_string(models[j].kind), exact(p.prior),
                       exact(models[j].prior.alpha), exact(models[j].prior.beta), exact(p.log_evidence),
                       exact(p.posterior)));
  }
  w.commit();
}

} // namespace bayesens
