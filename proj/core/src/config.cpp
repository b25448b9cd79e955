#include "orgnorms/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace orgnorms {

namespace {

using nlohmann::json;

constexpr std::array kKnownKeys{"N",       "P",       "N_s",     "D",          "T",
                                "T_L",     "R",       "workers", "seed",       "rho",
                                "complexity", "weights", "schemes", "goals",   "out_dir",
                                "emit_series", "paired_landscapes"};

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string key_location(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string_view::npos) return "";
  return " (line " + std::to_string(line_of(text, pos)) + ")";
}

class Reader {
 public:
  Reader(const json& doc, std::string_view text) : doc_(doc), text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("config key '" + key + "'" + key_location(text_, key) + ": " + what);
  }

  const json* find(const std::string& key) const {
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void integer(const std::string& key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }

  double number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  std::pair<double, double> pair(const std::string& key, const json& v) const {
    if (!v.is_array() || v.size() != 2) fail(key, "expected a pair [a, b]");
    return {number(key, v[0]), number(key, v[1])};
  }

  template <typename T, typename F>
  void list(const std::string& key, std::vector<T>& out, F&& convert) const {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array");
      out.clear();
      for (const auto& item : *v) out.push_back(convert(item));
    }
  }

 private:
  const json& doc_;
  std::string_view text_;
};

Complexity parse_complexity(const Reader& rd, const json& v) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    for (const Complexity* c : {&kInternal, &kLow, &kModerate, &kHigh}) {
      if (c->label == name) return *c;
    }
    rd.fail("complexity", "unknown level '" + name + "' (expected internal, low, moderate or high)");
  }
  if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& e) {
        return e.is_number_integer();
      })) {
    rd.fail("complexity", "expected a level name or an integer triple [K, C, S]");
  }
  return complexity_for({v[0].get<int>(), v[1].get<int>(), v[2].get<int>()});
}

}  // namespace

ExperimentConfig parse_config(std::string_view document) {
  const bool blank = std::all_of(document.begin(), document.end(),
                                 [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; });
  json doc = json::object();
  if (!blank) {
    try {
      doc = json::parse(document);
    } catch (const json::parse_error& e) {
      throw ConfigError("config parse error at line " + std::to_string(line_of(document, e.byte > 0 ? e.byte - 1 : 0)) +
                        ": " + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError("unknown config key '" + key + "'" + key_location(document, key));
    }
  }

  ExperimentConfig cfg;
  GridConfig& g = cfg.grid;
  RunSettings& run = cfg.settings;
  const Reader rd(doc, document);

  rd.integer("N", g.N);
  rd.integer("P", g.P);
  rd.integer("N_s", g.social_tasks);
  rd.integer("D", g.degree);
  rd.integer("T", g.periods);
  rd.integer("T_L", g.memory_span);
  rd.integer("R", run.runs);
  rd.integer("workers", run.workers);
  if (const json* v = rd.find("seed")) {
    if (!v->is_number_unsigned()) rd.fail("seed", "expected a non-negative integer");
    g.seed = v->get<Seed>();
  }
  if (const json* v = rd.find("rho")) {
    if (v->is_number()) {
      g.rhos = {v->get<double>()};
    } else {
      rd.list("rho", g.rhos, [&](const json& e) { return rd.number("rho", e); });
    }
  }
  rd.list("complexity", g.complexities, [&](const json& e) { return parse_complexity(rd, e); });
  rd.list("weights", g.weights, [&](const json& e) {
    const auto [a, b] = rd.pair("weights", e);
    return GoalWeights{a, b};
  });
  rd.list("schemes", g.schemes, [&](const json& e) {
    const auto [a, b] = rd.pair("schemes", e);
    return IncentiveScheme{a, b};
  });
  if (const json* v = rd.find("goals")) {
    std::tie(g.g_inc, g.g_soc) = rd.pair("goals", *v);
  }
  if (const json* v = rd.find("out_dir")) {
    if (!v->is_string()) rd.fail("out_dir", "expected a string");
    run.out_dir = v->get<std::string>();
  }
  rd.boolean("emit_series", run.emit_series);
  rd.boolean("paired_landscapes", g.paired_landscapes);

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const ExperimentConfig& config) {
  if (config.settings.runs < 1) throw ConfigError("R >= 1 violated");
  if (config.settings.workers < 0) throw ConfigError("workers >= 0 violated");
  try {
    (void)expand_grid(config.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.runs) config.settings.runs = *o.runs;
  if (o.periods) config.grid.periods = *o.periods;
  if (o.seed) config.grid.seed = *o.seed;
  if (o.workers) config.settings.workers = *o.workers;
  if (o.out_dir) config.settings.out_dir = *o.out_dir;
  if (o.emit_series) config.settings.emit_series = *o.emit_series;
  if (o.paired_landscapes) config.grid.paired_landscapes = *o.paired_landscapes;
  validate(config);
}

}  // namespace orgnorms
