// orgnorms: runs the incentive / social-norm experiment grid and writes CSVs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "orgnorms/config.hpp"
#include "orgnorms/csv_output.hpp"
#include "orgnorms/experiment.hpp"
#include "orgnorms/landscape.hpp"
#include "orgnorms/landscape_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr const char* kWorkersEnv = "ORGNORMS_WORKERS";

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_command(const std::string& config_path, const orgnorms::Overrides& overrides, bool quiet) {
  orgnorms::ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? orgnorms::parse_config("") : orgnorms::load_config(config_path);
    orgnorms::Overrides effective = overrides;
    if (!effective.workers) {
      if (const char* env = std::getenv(kWorkersEnv)) {
        try {
          effective.workers = std::stoi(env);
        } catch (const std::exception&) {
          throw orgnorms::ConfigError(std::string(kWorkersEnv) + " is not an integer: " + env);
        }
      }
    }
    orgnorms::apply_overrides(cfg, effective);
  } catch (const orgnorms::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto scenarios = orgnorms::expand_grid(cfg.grid);
    const int workers = resolve_workers(cfg.settings.workers);
    if (!quiet) {
      std::cerr << scenarios.size() << " scenarios x " << cfg.settings.runs << " runs on " << workers
                << " worker(s)\n";
    }
    orgnorms::ProgressFn progress;
    if (!quiet) {
      progress = [](std::size_t done, std::size_t total) {
        if (done == total || done % 100 == 0) {
          std::cerr << "\r" << done << "/" << total << " runs" << (done == total ? "\n" : "") << std::flush;
        }
      };
    }
    const auto summaries = orgnorms::run_grid(scenarios, cfg.settings.runs, workers, progress);
    const auto files =
        orgnorms::write_outputs(summaries, {cfg.settings.out_dir, cfg.settings.emit_series});
    for (const auto& f : files) std::cout << f.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

int landscape_command(int N, int P, int K, int C, int S, double rho, std::uint64_t seed,
                      const std::string& out) {
  orgnorms::InteractionStructure structure;
  try {
    structure = orgnorms::build_structure(N, P, {K, C, S});
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho in [0, 1] violated");
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const auto lsc = orgnorms::sample_landscape(structure, rho, seed);
    orgnorms::save_landscape(lsc, std::filesystem::path(out));
    std::cout << "global_max " << orgnorms::format_number(lsc.global_max()) << " argmax 0x" << std::hex
              << lsc.argmax_state().bits() << std::dec << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulates hill-climbing agents balancing incentives and social norms on NK landscapes"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the scenario grid and write CSV outputs");
  std::string config_path;
  orgnorms::Overrides overrides;
  int runs = 0, periods = 0, workers = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool paired = true;
  bool quiet = false;
  run->add_option("config", config_path, "JSON config file (defaults to the standard 48-scenario grid)")
      ->check(CLI::ExistingFile);
  auto* runs_opt = run->add_option("-R,--runs", runs, "Repetitions per scenario")->check(CLI::PositiveNumber);
  auto* periods_opt = run->add_option("-T,--periods", periods, "Observation periods")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Global seed");
  auto* workers_opt = run->add_option("-j,--workers", workers,
                                      std::string("Worker threads (default: $") + kWorkersEnv +
                                          ", else hardware concurrency)")
                          ->check(CLI::PositiveNumber);
  auto* out_opt = run->add_option("-o,--out-dir", out_dir, "Output directory");
  auto* series_flag = run->add_flag("--emit-series", "Also write per-period mean series (series.csv)");
  auto* paired_opt = run->add_option("--paired-landscapes", paired,
                                     "Share landscapes and streams per run index across scenarios (true/false)");
  run->add_flag("-q,--quiet", quiet, "Suppress progress output");

  auto* lsc_cmd = app.add_subcommand("landscape", "Sample one landscape and dump it in binary form");
  int N = 4, P = 4, K = 0, C = 0, S = 0;
  double rho = 0.3;
  std::uint64_t lsc_seed = 1;
  std::string lsc_out;
  lsc_cmd->add_option("--N", N, "Tasks per agent");
  lsc_cmd->add_option("--P", P, "Agents");
  lsc_cmd->add_option("--K", K, "Internal couplings");
  lsc_cmd->add_option("--C", C, "External couplings per coupled agent");
  lsc_cmd->add_option("--S", S, "Coupled external agents");
  lsc_cmd->add_option("--rho", rho, "Cross-agent correlation");
  lsc_cmd->add_option("--seed", lsc_seed, "Seed");
  lsc_cmd->add_option("-o,--out", lsc_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run) {
    if (*runs_opt) overrides.runs = runs;
    if (*periods_opt) overrides.periods = periods;
    if (*seed_opt) overrides.seed = seed;
    if (*workers_opt) overrides.workers = workers;
    if (*out_opt) overrides.out_dir = out_dir;
    if (*series_flag) overrides.emit_series = true;
    if (*paired_opt) overrides.paired_landscapes = paired;
    return run_command(config_path, overrides, quiet);
  }
  return landscape_command(N, P, K, C, S, rho, lsc_seed, lsc_out);
}
