#include "orgnorms/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "orgnorms/orgsim.hpp"

namespace orgnorms {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

bool near(double a, double b) { return std::abs(a - b) <= 1e-9; }

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

double sample_std(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

Complexity complexity_for(Coupling coupling) {
  for (const Complexity* c : {&kInternal, &kLow, &kModerate, &kHigh}) {
    if (c->coupling == coupling) return *c;
  }
  return {"K" + std::to_string(coupling.K) + "C" + std::to_string(coupling.C) + "S" +
              std::to_string(coupling.S),
          coupling};
}

void validate(const Scenario& scn) {
  // Coupling bounds and the enumeration limit.
  (void)build_structure(scn.N, scn.P, scn.complexity.coupling);
  (void)ring_network(scn.P, scn.degree);
  if (!(scn.rho >= 0.0 && scn.rho <= 1.0)) reject("rho in [0, 1] violated");
  const auto [alpha, beta] = scn.scheme;
  if (alpha < 0.0 || beta < 0.0) reject("alpha, beta >= 0 violated");
  if (!near(alpha + beta, 1.0)) reject("alpha + beta = 1 violated");
  const auto [w_inc, w_soc] = scn.weights;
  if (w_inc < 0.0 || w_soc < 0.0) reject("w_inc, w_soc >= 0 violated");
  if (!near(w_inc + w_soc, 1.0)) reject("w_inc + w_soc = 1 violated");
  if (scn.social_tasks < 0 || scn.social_tasks > scn.N) reject("0 <= N_s <= N violated");
  if (scn.periods < 1) reject("T >= 1 violated");
  if (scn.memory_span < 0) reject("T_L >= 0 violated");
  if (!std::isfinite(scn.g_inc) || !std::isfinite(scn.g_soc)) reject("goals must be finite");
}

Seed scenario_seed(const Scenario& scn) {
  const auto& c = scn.complexity.coupling;
  return derive_seed(scn.global_seed,
                     {kTagScenario, u64(scn.N), u64(scn.P), u64(c.K), u64(c.C), u64(c.S),
                      double_bits(scn.rho), double_bits(scn.weights.w_inc),
                      double_bits(scn.weights.w_soc), double_bits(scn.scheme.alpha),
                      double_bits(scn.scheme.beta), u64(scn.social_tasks), u64(scn.degree),
                      u64(scn.periods), u64(scn.memory_span)});
}

Seed run_seed(const Scenario& scn, int r) {
  if (scn.paired_landscapes) {
    const auto& c = scn.complexity.coupling;
    return derive_seed(scn.global_seed,
                       {kTagPaired, u64(scn.N), u64(scn.P), u64(c.K), u64(c.C), u64(c.S), u64(r)});
  }
  return derive_seed(scn.base_seed, {kTagRun, u64(r)});
}

std::vector<Scenario> expand_grid(const GridConfig& config) {
  if (config.complexities.empty()) reject("grid dimension 'complexity' is empty");
  if (config.rhos.empty()) reject("grid dimension 'rho' is empty");
  if (config.weights.empty()) reject("grid dimension 'weights' is empty");
  if (config.schemes.empty()) reject("grid dimension 'schemes' is empty");

  std::vector<Scenario> out;
  out.reserve(config.rhos.size() * config.complexities.size() * config.weights.size() *
              config.schemes.size());
  for (double rho : config.rhos) {
    for (const auto& complexity : config.complexities) {
      for (const auto& weights : config.weights) {
        for (const auto& scheme : config.schemes) {
          Scenario s;
          s.complexity = complexity;
          s.weights = weights;
          s.scheme = scheme;
          s.rho = rho;
          s.N = config.N;
          s.P = config.P;
          s.social_tasks = config.social_tasks;
          s.degree = config.degree;
          s.periods = config.periods;
          s.memory_span = config.memory_span;
          s.g_inc = config.g_inc;
          s.g_soc = config.g_soc;
          s.global_seed = config.seed;
          s.paired_landscapes = config.paired_landscapes;
          validate(s);
          s.base_seed = scenario_seed(s);
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

double RunResult::distance() const noexcept {
  double d = 0.0;
  for (double v : phi) d += 1.0 - v;
  return d;
}

Landscape run_landscape(const Scenario& scn, int r) {
  const InteractionStructure structure = build_structure(scn.N, scn.P, scn.complexity.coupling);
  return sample_landscape(structure, scn.rho, run_seed(scn, r));
}

bool shares_landscapes(const Scenario& a, const Scenario& b) {
  return a.paired_landscapes && b.paired_landscapes && a.global_seed == b.global_seed && a.N == b.N &&
         a.P == b.P && a.complexity.coupling == b.complexity.coupling && a.rho == b.rho;
}

RunResult run_once(const Scenario& scn, int r, RunOptions options) {
  return run_once(scn, r, run_landscape(scn, r), options);
}

RunResult run_once(const Scenario& scn, int r, const Landscape& lsc, RunOptions options) {
  const Seed seed = run_seed(scn, r);
  if (lsc.seed() != seed || lsc.rho() != scn.rho ||
      !(lsc.structure().coupling() == scn.complexity.coupling) || lsc.N() != scn.N || lsc.P() != scn.P) {
    throw std::invalid_argument("run_once: landscape does not belong to this scenario and run");
  }

  Engine init_rng(derive_seed(seed, {kTagInitial}));
  const int M = lsc.M();
  const std::uint32_t init_bits = static_cast<std::uint32_t>(init_rng() & ((std::uint64_t{1} << M) - 1U));

  std::vector<AgentSpec> agents(static_cast<std::size_t>(scn.P));
  for (int p = 0; p < scn.P; ++p) {
    agents[static_cast<std::size_t>(p)] = AgentSpec{p,
                                                    scn.scheme.alpha,
                                                    scn.scheme.beta,
                                                    scn.weights.w_inc,
                                                    scn.weights.w_soc,
                                                    scn.g_inc,
                                                    scn.g_soc,
                                                    scn.social_tasks};
  }
  Organization org(lsc, std::move(agents), ring_network(scn.P, scn.degree), scn.memory_span,
                   OrgState(M, init_bits), seed);

  RunResult result;
  result.seed = seed;
  result.landscape_digest = lsc.digest();
  result.phi.reserve(static_cast<std::size_t>(scn.periods));
  if (options.record_states) {
    result.states.reserve(static_cast<std::size_t>(scn.periods) + 1);
    result.states.push_back(org.state().bits());
  }
  const double max = lsc.global_max();
  for (int t = 1; t <= scn.periods; ++t) {
    const OrgState& x = org.step();
    result.phi.push_back(org_performance(lsc, x) / max);
    if (options.record_states) result.states.push_back(x.bits());
  }
  return result;
}

ScenarioSummary summarize(std::span<const RunResult> results, const Scenario& scn) {
  if (results.empty()) reject("summarize: no run results");
  const std::size_t T = results.front().phi.size();
  for (const auto& r : results) {
    if (r.phi.size() != T) reject("summarize: runs have unequal lengths");
  }
  const auto R = static_cast<double>(results.size());

  ScenarioSummary s;
  s.scenario = scn;
  s.runs = static_cast<int>(results.size());
  s.mean.assign(T, 0.0);
  s.std_error.assign(T, 0.0);
  for (const auto& r : results) {
    for (std::size_t t = 0; t < T; ++t) s.mean[t] += r.phi[t];
  }
  for (double& m : s.mean) m /= R;
  if (results.size() > 1) {
    for (std::size_t t = 0; t < T; ++t) {
      double ss = 0.0;
      for (const auto& r : results) ss += (r.phi[t] - s.mean[t]) * (r.phi[t] - s.mean[t]);
      s.std_error[t] = std::sqrt(ss / (R - 1.0)) / std::sqrt(R);
    }
  }
  for (double m : s.mean) s.distance += 1.0 - m;

  s.run_distances.reserve(results.size());
  double mean_d = 0.0;
  for (const auto& r : results) {
    s.run_distances.push_back(r.distance());
    mean_d += s.run_distances.back();
  }
  mean_d /= R;
  s.distance_se = sample_std(s.run_distances, mean_d) / std::sqrt(R);
  return s;
}

double paired_difference_se(const ScenarioSummary& a, const ScenarioSummary& b) {
  if (a.run_distances.size() != b.run_distances.size() || a.run_distances.empty()) {
    reject("paired_difference_se: summaries have different run counts");
  }
  std::vector<double> diff(a.run_distances.size());
  double mean = 0.0;
  for (std::size_t r = 0; r < diff.size(); ++r) {
    diff[r] = a.run_distances[r] - b.run_distances[r];
    mean += diff[r];
  }
  mean /= static_cast<double>(diff.size());
  return sample_std(diff, mean) / std::sqrt(static_cast<double>(diff.size()));
}

RunFailure::RunFailure(std::size_t scenario, int run, const std::string& what)
    : std::runtime_error("scenario " + std::to_string(scenario) + ", run " + std::to_string(run) +
                         ": " + what),
      scenario_(scenario),
      run_(run) {}

std::vector<ScenarioSummary> run_grid(std::span<const Scenario> scenarios, int runs, int workers,
                                      const ProgressFn& progress) {
  if (workers < 1) reject("worker budget must be >= 1");
  if (runs < 1) reject("runs must be >= 1");
  if (scenarios.empty()) return {};

  // Scenarios sharing landscapes form one group; a task is (group, run) and
  // samples its landscape once for all member scenarios.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return shares_landscapes(scenarios[g.front()], scenarios[i]);
    });
    if (it == groups.end()) {
      groups.push_back({i});
    } else {
      it->push_back(i);
    }
  }

  const std::size_t per = static_cast<std::size_t>(runs);
  const std::size_t total = scenarios.size() * per;
  const std::size_t tasks = groups.size() * per;
  std::vector<RunResult> results(total);
  std::vector<std::optional<std::string>> errors(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < tasks; k = next.fetch_add(1)) {
      const auto& group = groups[k / per];
      const int r = static_cast<int>(k % per);
      std::optional<Landscape> lsc;
      std::string landscape_error;
      try {
        lsc.emplace(run_landscape(scenarios[group.front()], r));
      } catch (const std::exception& e) {
        landscape_error = e.what();
      }
      for (std::size_t s : group) {
        const std::size_t slot = s * per + static_cast<std::size_t>(r);
        try {
          if (!lsc) throw std::runtime_error(landscape_error);
          results[slot] = run_once(scenarios[s], r, *lsc);
        } catch (const std::exception& e) {
          errors[slot] = e.what();
        }
        const std::size_t finished = done.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(finished, total);
        }
      }
    }
  };

  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), tasks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < total; ++k) {
    if (errors[k]) throw RunFailure(k / per, static_cast<int>(k % per), *errors[k]);
  }

  std::vector<ScenarioSummary> summaries;
  summaries.reserve(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    summaries.push_back(
        summarize(std::span<const RunResult>(results).subspan(s * per, per), scenarios[s]));
  }
  return summaries;
}

}  // namespace orgnorms
