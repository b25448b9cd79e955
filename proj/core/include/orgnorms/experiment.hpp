#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orgnorms/landscape.hpp"
#include "orgnorms/seeding.hpp"

namespace orgnorms {

struct Complexity {
  std::string label;
  Coupling coupling;

  friend bool operator==(const Complexity&, const Complexity&) = default;
};

// The four coupling levels of the experiment grid.
inline const Complexity kInternal{"internal", {3, 0, 0}};
inline const Complexity kLow{"low", {1, 1, 1}};
inline const Complexity kModerate{"moderate", {2, 2, 2}};
inline const Complexity kHigh{"high", {3, 4, 3}};

// Looks up one of the named levels above, or labels a custom coupling as
// "K<k>C<c>S<s>".
Complexity complexity_for(Coupling coupling);

struct GoalWeights {
  double w_inc = 1.0;
  double w_soc = 0.0;
  friend bool operator==(const GoalWeights&, const GoalWeights&) = default;
};

struct IncentiveScheme {
  double alpha = 1.0;
  double beta = 0.0;
  friend bool operator==(const IncentiveScheme&, const IncentiveScheme&) = default;
};

/// One cell of the experiment grid.
struct Scenario {
  Complexity complexity = kInternal;
  GoalWeights weights;
  IncentiveScheme scheme;
  double rho = 0.3;
  int N = 4;
  int P = 4;
  int social_tasks = 2;
  int degree = 2;
  int periods = 500;
  int memory_span = 20;
  double g_inc = 1.0;
  double g_soc = 1.0;
  Seed global_seed = 0;
  Seed base_seed = 0;
  // Runs with the same index share initial state, agent streams and latent
  // landscape draws across scenarios with equal (N, P, K, C, S); with equal
  // rho as well they share the landscape itself.
  bool paired_landscapes = true;
};

/// Value lists per grid dimension plus the shared parameters.
struct GridConfig {
  std::vector<Complexity> complexities{kInternal, kLow, kModerate, kHigh};
  std::vector<double> rhos{0.3};
  std::vector<GoalWeights> weights{{1.0, 0.0}, {0.7, 0.3}, {0.5, 0.5}};
  std::vector<IncentiveScheme> schemes{{1.0, 0.0}, {0.75, 0.25}, {0.5, 0.5}, {0.25, 0.75}};
  int N = 4;
  int P = 4;
  int social_tasks = 2;
  int degree = 2;
  int periods = 500;
  int memory_span = 20;
  double g_inc = 1.0;
  double g_soc = 1.0;
  Seed seed = 20210705;
  bool paired_landscapes = true;
};

// Checks every bound of a scenario; throws std::invalid_argument naming the
// violated one.
void validate(const Scenario& scn);

// Seed of a scenario derived from the global seed and its coordinates.
Seed scenario_seed(const Scenario& scn);

// Seed of run r of a scenario.
Seed run_seed(const Scenario& scn, int r);

// Cross product in the order rho, complexity, weights, scheme (last varies
// fastest). Each scenario is validated and receives its base seed.
std::vector<Scenario> expand_grid(const GridConfig& config);

struct RunResult {
  std::vector<double> phi;  // normalized performance for t = 1..T
  Seed seed = 0;
  std::uint64_t landscape_digest = 0;
  std::vector<std::uint32_t> states;  // x_0..x_T when recorded

  // Sum over t of (1 - phi[t]).
  double distance() const noexcept;
};

struct RunOptions {
  bool record_states = false;
};

RunResult run_once(const Scenario& scn, int r, RunOptions options = {});

// The landscape run r of `scn` samples; run_once(scn, r, lsc) with it is
// identical to run_once(scn, r).
Landscape run_landscape(const Scenario& scn, int r);
RunResult run_once(const Scenario& scn, int r, const Landscape& lsc, RunOptions options = {});

// True when run r of `a` and of `b` sample the same landscape for every r.
bool shares_landscapes(const Scenario& a, const Scenario& b);

/// Aggregate of the runs of one scenario.
struct ScenarioSummary {
  Scenario scenario;
  int runs = 0;
  std::vector<double> mean;       // mean phi per period
  std::vector<double> std_error;  // per period, 0 when runs == 1
  double distance = 0.0;          // sum over t of (1 - mean[t])
  double distance_se = 0.0;       // standard error of the per-run distances
  std::vector<double> run_distances;
};

// Throws std::invalid_argument for an empty input or unequal lengths.
ScenarioSummary summarize(std::span<const RunResult> results, const Scenario& scn = {});

// Standard error of the mean paired difference a.run_distances - b.run_distances.
double paired_difference_se(const ScenarioSummary& a, const ScenarioSummary& b);

class RunFailure : public std::runtime_error {
 public:
  RunFailure(std::size_t scenario, int run, const std::string& what);
  std::size_t scenario() const noexcept { return scenario_; }
  int run() const noexcept { return run_; }

 private:
  std::size_t scenario_;
  int run_;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Executes runs * scenarios.size() runs on up to `workers` threads. Results
// are bitwise independent of the worker count. The first failing run (in
// grid order) is rethrown as RunFailure.
std::vector<ScenarioSummary> run_grid(std::span<const Scenario> scenarios, int runs, int workers,
                                      const ProgressFn& progress = {});

}  // namespace orgnorms
