#pragma once
#include <stdexcept>
#include <string>

namespace bayesens {

// Configuration or command-line usage problem (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
  enum class Kind { malformed_row, nonpositive_price, too_few_rows, non_increasing_time, invalid_value, io };

  DataError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

// Iterative numerical procedure failed to reach its tolerance (CLI exit code 4).
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}
  double previous_estimate() const noexcept { return previous_; }
  double last_estimate() const noexcept { return last_; }

private:
  double previous_;
  double last_;
};

} // namespace bayesens
