#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "orgnorms/experiment.hpp"

namespace orgnorms {

// Malformed or invalid configuration. The message carries the line (for
// syntax errors and unknown keys) or the violated bound.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Execution options that are not part of the scenario grid.
struct RunSettings {
  int runs = 300;
  int workers = 0;  // 0: one per hardware thread
  std::filesystem::path out_dir = "results";
  bool emit_series = false;
};

struct ExperimentConfig {
  GridConfig grid;
  RunSettings settings;
};

/// Command-line overrides, applied on top of a parsed document.
struct Overrides {
  std::optional<int> runs;
  std::optional<int> periods;
  std::optional<Seed> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out_dir;
  std::optional<bool> emit_series;
  std::optional<bool> paired_landscapes;
};

// Parses a JSON document. An empty document yields the default grid.
// Recognized keys:
//
//   N, P, N_s, D, T, T_L         integers
//   R, workers                   integers
//   seed                         unsigned integer
//   rho                          number or array of numbers
//   complexity                   array of "internal" | "low" | "moderate" |
//                                "high" | [K, C, S]
//   weights                      array of [w_inc, w_soc]
//   schemes                      array of [alpha, beta]
//   goals                        [g_inc, g_soc]
//   out_dir                      string
//   emit_series                  boolean
//   paired_landscapes            boolean
//
// Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view document);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies overrides and re-validates. Throws ConfigError.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

// Checks every bound by expanding the grid. Throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace orgnorms
