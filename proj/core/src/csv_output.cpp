#include "orgnorms/csv_output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orgnorms {

namespace {

std::string tick(double a, double b) { return format_number(a) + ":" + format_number(b); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string schema_line(const std::string& kind) {
  return "# orgnorms-" + kind + " schema=" + std::to_string(kCsvSchemaVersion);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string summary_csv(std::span<const ScenarioSummary> summaries) {
  std::ostringstream out;
  out << schema_line("summary") << '\n' << kSummaryHeader << '\n';
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    const auto& scn = s.scenario;
    const auto& c = scn.complexity.coupling;
    out << i << ',' << scn.complexity.label << ',' << c.K << ',' << c.C << ',' << c.S << ','
        << format_number(scn.weights.w_inc) << ',' << format_number(scn.weights.w_soc) << ','
        << format_number(scn.scheme.alpha) << ',' << format_number(scn.scheme.beta) << ','
        << format_number(scn.rho) << ',' << s.runs << ',' << format_number(s.distance) << ','
        << format_number(s.distance_se) << ','
        << format_number(s.mean.empty() ? std::nan("") : s.mean.back()) << ','
        << format_number(s.std_error.empty() ? std::nan("") : s.std_error.back()) << '\n';
  }
  return out.str();
}

std::vector<ContourTable> contour_tables(std::span<const ScenarioSummary> summaries) {
  std::vector<ContourTable> tables;
  auto group_of = [&](const Scenario& scn) -> ContourTable& {
    for (auto& t : tables) {
      if (t.complexity == scn.complexity && t.rho == scn.rho) return t;
    }
    tables.push_back({scn.complexity, scn.rho, {}, {}, {}});
    return tables.back();
  };
  for (const auto& s : summaries) {
    auto& t = group_of(s.scenario);
    if (std::find(t.rows.begin(), t.rows.end(), s.scenario.weights) == t.rows.end()) {
      t.rows.push_back(s.scenario.weights);
    }
    if (std::find(t.columns.begin(), t.columns.end(), s.scenario.scheme) == t.columns.end()) {
      t.columns.push_back(s.scenario.scheme);
    }
  }
  for (auto& t : tables) {
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const GoalWeights& a, const GoalWeights& b) { return a.w_soc < b.w_soc; });
    std::stable_sort(t.columns.begin(), t.columns.end(),
                     [](const IncentiveScheme& a, const IncentiveScheme& b) { return a.alpha > b.alpha; });
    t.distance.assign(t.rows.size(),
                      std::vector<double>(t.columns.size(), std::numeric_limits<double>::quiet_NaN()));
  }
  for (const auto& s : summaries) {
    auto& t = group_of(s.scenario);
    const auto r = std::find(t.rows.begin(), t.rows.end(), s.scenario.weights) - t.rows.begin();
    const auto c = std::find(t.columns.begin(), t.columns.end(), s.scenario.scheme) - t.columns.begin();
    t.distance[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = s.distance;
  }
  return tables;
}

std::string contour_csv(const ContourTable& table) {
  std::ostringstream out;
  const auto& c = table.complexity.coupling;
  out << schema_line("contour") << '\n'
      << "# complexity=" << table.complexity.label << " K=" << c.K << " C=" << c.C << " S=" << c.S
      << " rho=" << format_number(table.rho) << '\n';
  out << "w_inc:w_soc";
  for (const auto& col : table.columns) out << ',' << tick(col.alpha, col.beta);
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << tick(table.rows[r].w_inc, table.rows[r].w_soc);
    for (double d : table.distance[r]) out << ',' << format_number(d);
    out << '\n';
  }
  return out.str();
}

std::string series_csv(std::span<const ScenarioSummary> summaries) {
  std::ostringstream out;
  out << schema_line("series") << '\n' << kSeriesHeader << '\n';
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
      out << i << ',' << (t + 1) << ',' << format_number(s.mean[t]) << ','
          << format_number(s.std_error[t]) << '\n';
    }
  }
  return out.str();
}

std::vector<std::filesystem::path> write_outputs(std::span<const ScenarioSummary> summaries,
                                                 const OutputOptions& options) {
  if (summaries.empty()) throw std::invalid_argument("write_outputs: no summaries");
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + options.out_dir.string() + ": " +
                             ec.message());
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = options.out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };

  emit("summary.csv", summary_csv(summaries));

  const auto tables = contour_tables(summaries);
  bool several_rhos = false;
  for (const auto& t : tables) several_rhos = several_rhos || t.rho != tables.front().rho;
  for (const auto& t : tables) {
    std::string name = "contour_" + t.complexity.label;
    if (several_rhos) name += "_rho" + format_number(t.rho);
    emit(name + ".csv", contour_csv(t));
  }

  if (options.emit_series) emit("series.csv", series_csv(summaries));
  return written;
}

}  // namespace orgnorms
