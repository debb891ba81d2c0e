#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyshrink {

/// Raised for invalid experiment settings; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat parameter record shared by every subcommand. Unset fields take the
/// subcommand's defaults.
struct ExperimentConfig {
  std::optional<int> p, p_min, p_max, n, threads;
  std::optional<std::uint64_t> trials, samples, seed;
  std::optional<std::vector<double>> theta;
  std::optional<double> d, rho1, rho2, lambda, a, alpha, lambda_star, a_star, step;
  std::optional<std::string> out, format, covariance, gamma_scaling;

  /// Fields set in `over` replace those in `*this`.
  ExperimentConfig merged_with(const ExperimentConfig& over) const;
};

/// Reads a JSON object whose keys are the flag names ("rho1", "p-min" or
/// "p_min", ...). Unknown keys and ill-typed values are ConfigErrors; an
/// unreadable file is a std::runtime_error naming the path.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

/// "1,0.5,-2" -> {1, 0.5, -2}.
std::vector<double> parse_vector(const std::string& text);

}  // namespace levyshrink
