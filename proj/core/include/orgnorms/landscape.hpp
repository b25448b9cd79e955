#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "orgnorms/seeding.hpp"

namespace orgnorms {

// Indices are zero-based throughout: task i in [0, M), agent p in [0, P),
// relative task position n in [0, N). Agent p owns tasks [N*p, N*p + N).

// Largest M for which landscapes are sampled and enumerated.
inline constexpr int kMaxTasks = 24;

/// Joint decision vector of the whole organization. Bit i holds task i.
class OrgState {
 public:
  OrgState() = default;
  OrgState(int tasks, std::uint32_t bits);

  int size() const noexcept { return tasks_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool bit(int i) const noexcept { return (bits_ >> i) & 1U; }
  void flip(int i) noexcept { bits_ ^= (1U << i); }

  // Agent p's N-bit sub-vector; bit n is the agent's n-th task.
  std::uint32_t block(int p, int n_per_agent) const noexcept;
  OrgState with_block(int p, int n_per_agent, std::uint32_t block) const;

  friend bool operator==(const OrgState&, const OrgState&) = default;

 private:
  int tasks_ = 0;
  std::uint32_t bits_ = 0;
};

/// Coupling parameters of the task environment.
struct Coupling {
  int K = 0;  // internal couplings per task
  int C = 0;  // tasks coupled in each external agent
  int S = 0;  // number of external agents coupled

  int degree() const noexcept { return K + C * S; }
  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// Dependency pattern of every task on other tasks.
class InteractionStructure {
 public:
  int N() const noexcept { return n_; }
  int P() const noexcept { return p_; }
  int M() const noexcept { return n_ * p_; }
  const Coupling& coupling() const noexcept { return coupling_; }
  int degree() const noexcept { return coupling_.degree(); }

  // Ordered dependencies of task i: K internal ones first, then C per
  // external agent for agents p+1, ..., p+S.
  std::span<const int> deps(int i) const noexcept;

  // Configuration index of task i under `x`: bit 0 is x_i, bit k+1 is the
  // k-th dependency.
  std::uint32_t config_index(int i, const OrgState& x) const noexcept;

  friend InteractionStructure build_structure(int N, int P, Coupling coupling);

 private:
  int n_ = 0;
  int p_ = 0;
  Coupling coupling_{};
  std::vector<int> deps_;  // M * degree, row-major
};

// Internal deps of task n are the next K tasks of the same block
// (cyclically); external deps are positions n, ..., n+C-1 (cyclically) of
// agents p+1, ..., p+S (cyclically). Throws std::invalid_argument naming the
// violated bound.
InteractionStructure build_structure(int N, int P, Coupling coupling);

/// Contribution tables for every task plus the exhaustive maximum.
class Landscape {
 public:
  Landscape(InteractionStructure structure, double rho, Seed seed,
            std::vector<double> tables);

  const InteractionStructure& structure() const noexcept { return structure_; }
  double rho() const noexcept { return rho_; }
  Seed seed() const noexcept { return seed_; }
  int N() const noexcept { return structure_.N(); }
  int P() const noexcept { return structure_.P(); }
  int M() const noexcept { return structure_.M(); }

  std::size_t configs_per_task() const noexcept { return configs_; }
  std::span<const double> table(int i) const noexcept;
  std::span<const double> tables() const noexcept { return tables_; }

  double global_max() const noexcept { return global_max_; }
  const OrgState& argmax_state() const noexcept { return argmax_; }

  // Stable digest of the contribution tables.
  std::uint64_t digest() const noexcept;

 private:
  InteractionStructure structure_;
  double rho_ = 0.0;
  Seed seed_ = 0;
  std::size_t configs_ = 0;
  std::vector<double> tables_;
  double global_max_ = 0.0;
  OrgState argmax_;
};

// Gaussian-copula correlation used for the latent normals so that the
// uniform contributions have Pearson correlation `rho`.
double latent_correlation(double rho);

Landscape sample_landscape(const InteractionStructure& structure, double rho, Seed seed);

double contribution(const Landscape& lsc, int i, const OrgState& x);
double agent_performance(const Landscape& lsc, int p, const OrgState& x);
double org_performance(const Landscape& lsc, const OrgState& x);

// All M contributions of `x`, in task order.
void contributions(const Landscape& lsc, const OrgState& x, std::span<double> out);

// Mean of block means. Shared by org_performance and the enumeration so the
// normalized performance of the argmax state is exactly 1.
double block_mean(std::span<const double> contribs, int N, int P);

struct GlobalMax {
  double value = 0.0;
  OrgState state;
};

// Exhaustive maximum over all 2^M states. Throws std::length_error for
// M > kMaxTasks.
GlobalMax compute_global_max(const Landscape& lsc);

}  // namespace orgnorms
