#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "orgnorms/experiment.hpp"

namespace orgnorms {

inline constexpr int kCsvSchemaVersion = 1;

// First line of every CSV file, e.g. "# orgnorms-summary schema=1".
std::string schema_line(const std::string& kind);

inline constexpr const char* kSummaryHeader =
    "scenario,complexity,K,C,S,w_inc,w_soc,alpha,beta,rho,runs,distance,distance_se,"
    "final_mean,final_se";
inline constexpr const char* kSeriesHeader = "scenario,t,mean,std_error";

// 10 significant digits.
std::string format_number(double v);

struct OutputOptions {
  std::filesystem::path out_dir = "results";
  bool emit_series = false;
};

// Renders the summary table, one row per scenario.
std::string summary_csv(std::span<const ScenarioSummary> summaries);

/// Distance matrix of one complexity level (and rho).
struct ContourTable {
  Complexity complexity;
  double rho = 0.0;
  std::vector<GoalWeights> rows;         // ascending w_soc (w_soc = 0 on top)
  std::vector<IncentiveScheme> columns;  // descending alpha (alpha = 1 leftmost)
  std::vector<std::vector<double>> distance;  // NaN where a cell has no scenario
};

// Groups summaries by (complexity, rho) in first-appearance order.
std::vector<ContourTable> contour_tables(std::span<const ScenarioSummary> summaries);
std::string contour_csv(const ContourTable& table);
std::string series_csv(std::span<const ScenarioSummary> summaries);

// Writes summary.csv, one contour_<level>[_rho<rho>].csv per group and,
// optionally, series.csv. Returns the written paths. Throws
// std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> write_outputs(std::span<const ScenarioSummary> summaries,
                                                 const OutputOptions& options);

}  // namespace orgnorms
