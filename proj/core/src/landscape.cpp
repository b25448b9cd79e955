#include "orgnorms/landscape.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace orgnorms {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct FlipEffect {
  int task;
  std::uint32_t mask;
};

// For every bit j, the tasks whose configuration index contains j and the
// index bits it occupies.
std::vector<std::vector<FlipEffect>> flip_effects(const InteractionStructure& s) {
  std::vector<std::vector<FlipEffect>> effects(static_cast<std::size_t>(s.M()));
  for (int i = 0; i < s.M(); ++i) {
    effects[static_cast<std::size_t>(i)].push_back({i, 1U});
    auto deps = s.deps(i);
    for (std::size_t k = 0; k < deps.size(); ++k) {
      effects[static_cast<std::size_t>(deps[k])].push_back({i, 1U << (k + 1)});
    }
  }
  return effects;
}

}  // namespace

OrgState::OrgState(int tasks, std::uint32_t bits) : tasks_(tasks), bits_(bits) {
  if (tasks < 0 || tasks > 32) {
    throw std::invalid_argument("OrgState: task count must be in [0, 32]");
  }
  if (tasks < 32) {
    bits_ &= (1U << tasks) - 1U;
  }
}

std::uint32_t OrgState::block(int p, int n_per_agent) const noexcept {
  return (bits_ >> (p * n_per_agent)) & ((1U << n_per_agent) - 1U);
}

OrgState OrgState::with_block(int p, int n_per_agent, std::uint32_t block) const {
  const std::uint32_t mask = ((1U << n_per_agent) - 1U) << (p * n_per_agent);
  const std::uint32_t bits = (bits_ & ~mask) | ((block << (p * n_per_agent)) & mask);
  return OrgState(tasks_, bits);
}

std::span<const int> InteractionStructure::deps(int i) const noexcept {
  const auto d = static_cast<std::size_t>(degree());
  return std::span<const int>(deps_).subspan(static_cast<std::size_t>(i) * d, d);
}

std::uint32_t InteractionStructure::config_index(int i, const OrgState& x) const noexcept {
  std::uint32_t index = x.bit(i) ? 1U : 0U;
  auto d = deps(i);
  for (std::size_t k = 0; k < d.size(); ++k) {
    index |= static_cast<std::uint32_t>(x.bit(d[k])) << (k + 1);
  }
  return index;
}

InteractionStructure build_structure(int N, int P, Coupling coupling) {
  const auto [K, C, S] = coupling;
  if (N < 1) reject("N >= 1 violated (N = " + std::to_string(N) + ")");
  if (P < 1) reject("P >= 1 violated (P = " + std::to_string(P) + ")");
  if (K < 0 || K >= N) {
    reject("0 <= K < N violated (K = " + std::to_string(K) + ", N = " + std::to_string(N) + ")");
  }
  if (C < 0 || C > N) {
    reject("0 <= C <= N violated (C = " + std::to_string(C) + ", N = " + std::to_string(N) + ")");
  }
  if (S < 0 || S >= P) {
    reject("0 <= S < P violated (S = " + std::to_string(S) + ", P = " + std::to_string(P) + ")");
  }
  if (N * P > kMaxTasks) {
    reject("M = N*P <= " + std::to_string(kMaxTasks) + " violated (M = " + std::to_string(N * P) + ")");
  }

  InteractionStructure s;
  s.n_ = N;
  s.p_ = P;
  s.coupling_ = coupling;
  s.deps_.reserve(static_cast<std::size_t>(N * P * coupling.degree()));
  for (int p = 0; p < P; ++p) {
    for (int n = 0; n < N; ++n) {
      for (int k = 1; k <= K; ++k) {
        s.deps_.push_back(p * N + (n + k) % N);
      }
      for (int e = 1; e <= S; ++e) {
        const int q = (p + e) % P;
        for (int c = 0; c < C; ++c) {
          s.deps_.push_back(q * N + (n + c) % N);
        }
      }
    }
  }
  return s;
}

Landscape::Landscape(InteractionStructure structure, double rho, Seed seed,
                     std::vector<double> tables)
    : structure_(std::move(structure)),
      rho_(rho),
      seed_(seed),
      configs_(std::size_t{1} << (1 + structure_.degree())),
      tables_(std::move(tables)) {
  if (tables_.size() != configs_ * static_cast<std::size_t>(structure_.M())) {
    throw std::invalid_argument("Landscape: expected " +
                                std::to_string(configs_ * static_cast<std::size_t>(structure_.M())) +
                                " table entries, got " + std::to_string(tables_.size()));
  }
  for (double v : tables_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Landscape: table entry outside [0, 1]");
    }
  }
  const GlobalMax gm = compute_global_max(*this);
  global_max_ = gm.value;
  argmax_ = gm.state;
}

std::span<const double> Landscape::table(int i) const noexcept {
  return std::span<const double>(tables_).subspan(static_cast<std::size_t>(i) * configs_, configs_);
}

std::uint64_t Landscape::digest() const noexcept {
  std::uint64_t h = derive_seed(0, {static_cast<std::uint64_t>(N()), static_cast<std::uint64_t>(P()),
                                    static_cast<std::uint64_t>(structure_.coupling().K),
                                    static_cast<std::uint64_t>(structure_.coupling().C),
                                    static_cast<std::uint64_t>(structure_.coupling().S)});
  for (double v : tables_) {
    h = mix64(h ^ double_bits(v));
  }
  return h;
}

double latent_correlation(double rho) {
  // 2 sin(pi/6) rounds just below 1; pin the endpoints.
  if (rho == 0.0) return 0.0;
  if (rho == 1.0) return 1.0;
  return 2.0 * std::sin(std::numbers::pi * rho / 6.0);
}

Landscape sample_landscape(const InteractionStructure& structure, double rho, Seed seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    reject("rho in [0, 1] violated (rho = " + std::to_string(rho) + ")");
  }
  const int N = structure.N();
  const int P = structure.P();
  const std::size_t configs = std::size_t{1} << (1 + structure.degree());
  const double r = latent_correlation(rho);
  const double shared = std::sqrt(r);
  const double idio = std::sqrt(1.0 - r);

  std::vector<double> tables(configs * static_cast<std::size_t>(structure.M()));
  Engine rng(derive_seed(seed, {kTagLandscape}));
  std::normal_distribution<double> normal;
  // P + 1 normals per (position, configuration) regardless of rho, so the
  // same seed yields common random numbers across correlation levels.
  for (int n = 0; n < N; ++n) {
    for (std::size_t c = 0; c < configs; ++c) {
      const double common = normal(rng);
      for (int p = 0; p < P; ++p) {
        const double z = shared * common + idio * normal(rng);
        const auto task = static_cast<std::size_t>(p * N + n);
        tables[task * configs + c] = standard_normal_cdf(z);
      }
    }
  }
  return Landscape(structure, rho, seed, std::move(tables));
}

double contribution(const Landscape& lsc, int i, const OrgState& x) {
  if (i < 0 || i >= lsc.M()) {
    throw std::out_of_range("contribution: task index " + std::to_string(i) + " outside [0, " +
                            std::to_string(lsc.M()) + ")");
  }
  return lsc.table(i)[lsc.structure().config_index(i, x)];
}

double agent_performance(const Landscape& lsc, int p, const OrgState& x) {
  if (p < 0 || p >= lsc.P()) {
    throw std::out_of_range("agent_performance: agent index " + std::to_string(p) + " outside [0, " +
                            std::to_string(lsc.P()) + ")");
  }
  const int N = lsc.N();
  double sum = 0.0;
  for (int n = 0; n < N; ++n) {
    const int i = p * N + n;
    sum += lsc.table(i)[lsc.structure().config_index(i, x)];
  }
  return sum / N;
}

void contributions(const Landscape& lsc, const OrgState& x, std::span<double> out) {
  const auto& s = lsc.structure();
  for (int i = 0; i < lsc.M(); ++i) {
    out[static_cast<std::size_t>(i)] = lsc.table(i)[s.config_index(i, x)];
  }
}

double block_mean(std::span<const double> contribs, int N, int P) {
  double total = 0.0;
  for (int p = 0; p < P; ++p) {
    double sum = 0.0;
    for (int n = 0; n < N; ++n) {
      sum += contribs[static_cast<std::size_t>(p * N + n)];
    }
    total += sum / N;
  }
  return total / P;
}

double org_performance(const Landscape& lsc, const OrgState& x) {
  std::vector<double> c(static_cast<std::size_t>(lsc.M()));
  contributions(lsc, x, c);
  return block_mean(c, lsc.N(), lsc.P());
}

GlobalMax compute_global_max(const Landscape& lsc) {
  const int M = lsc.M();
  if (M > kMaxTasks) {
    throw std::length_error("compute_global_max: M = " + std::to_string(M) +
                            " exceeds the enumeration limit " + std::to_string(kMaxTasks));
  }
  const auto& s = lsc.structure();
  const auto effects = flip_effects(s);

  // Gray-code walk: one bit flips per step and only the configuration
  // indices that contain it are updated.
  OrgState x(M, 0U);
  std::vector<std::uint32_t> index(static_cast<std::size_t>(M));
  std::vector<double> contrib(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    index[static_cast<std::size_t>(i)] = s.config_index(i, x);
    contrib[static_cast<std::size_t>(i)] = lsc.table(i)[index[static_cast<std::size_t>(i)]];
  }
  GlobalMax best{block_mean(contrib, lsc.N(), lsc.P()), x};

  const std::uint64_t states = std::uint64_t{1} << M;
  for (std::uint64_t g = 1; g < states; ++g) {
    const int j = std::countr_zero(g);
    x.flip(j);
    for (const FlipEffect& e : effects[static_cast<std::size_t>(j)]) {
      auto& idx = index[static_cast<std::size_t>(e.task)];
      idx ^= e.mask;
      contrib[static_cast<std::size_t>(e.task)] = lsc.table(e.task)[idx];
    }
    const double v = block_mean(contrib, lsc.N(), lsc.P());
    if (v > best.value) {
      best = {v, x};
    }
  }
  return best;
}

}  // namespace orgnorms
