#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "orgnorms/landscape.hpp"
#include "orgnorms/seeding.hpp"

namespace orgnorms {

/// Goals, weights and incentive shares of one agent.
struct AgentSpec {
  int index = 0;
  double alpha = 1.0;  // share of own performance
  double beta = 0.0;   // share of residual performance
  double w_inc = 1.0;
  double w_soc = 0.0;
  double g_inc = 1.0;
  double g_soc = 1.0;
  int social_tasks = 0;  // the last `social_tasks` positions of the block
};

// Social bits of an N-bit block: positions [N - Ns, N), shifted down.
std::uint32_t social_bits(std::uint32_t block, int N, int Ns) noexcept;

/// Social decisions received from fellow agents during the last T_L periods.
class NormMemory {
 public:
  struct Entry {
    int source = 0;
    std::uint32_t bits = 0;
    int period = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit NormMemory(int span = 0) : span_(span) {}

  int span() const noexcept { return span_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::deque<Entry>& entries() const noexcept { return entries_; }

  void receive(Entry e) { entries_.push_back(e); }
  // Drops every entry received at or before t - span.
  void evict(int t);

  friend bool operator==(const NormMemory&, const NormMemory&) = default;

 private:
  int span_ = 0;
  std::deque<Entry> entries_;
};

/// Directed sharing links; senders(p) are the agents p receives from.
class RingNetwork {
 public:
  int agents() const noexcept { return static_cast<int>(receivers_.size()); }
  int degree() const noexcept { return degree_; }
  std::span<const int> receivers(int p) const noexcept { return receivers_[static_cast<std::size_t>(p)]; }
  std::span<const int> senders(int p) const noexcept { return senders_[static_cast<std::size_t>(p)]; }

  friend RingNetwork ring_network(int P, int D);

 private:
  int degree_ = 0;
  std::vector<std::vector<int>> receivers_;
  std::vector<std::vector<int>> senders_;
};

// Bidirectional ring: p exchanges with p-1 and p+1 (cyclic). Only D = 2 and
// P >= 3 are supported; anything else throws std::invalid_argument.
RingNetwork ring_network(int P, int D);

// Mean own performance of every agent other than p. Throws for P = 1.
double residual_performance(const Landscape& lsc, int p, const OrgState& x);

double incentive(const AgentSpec& spec, const Landscape& lsc, const OrgState& x);

// Match rate of `bits` against the memory; 0 while t <= span and for an
// empty memory.
double norm_compliance(const NormMemory& mem, std::uint32_t bits, int Ns, int t);

// Flips one uniformly chosen position of an N-bit block.
std::uint32_t propose_candidate(std::uint32_t own_prev, int N, Engine& rng);

struct Underachievement {
  double social = 0.0;
  double incentive = 0.0;
};

// `option` is the agent's option block merged with the others' previous
// blocks.
Underachievement underachievements(const AgentSpec& spec, const Landscape& lsc,
                                   const NormMemory& mem, const OrgState& option, int t);

// Goal-programming choice between the status quo and a one-flip candidate,
// both evaluated against `others_prev`. Ties keep the status quo.
std::uint32_t decide(const AgentSpec& spec, const Landscape& lsc, const NormMemory& mem,
                     std::uint32_t status_quo, std::uint32_t candidate,
                     const OrgState& others_prev, int t);

// One synchronous period: every agent proposes from `prev` using its own
// stream, decides against `prev`, then implemented social bits are shared
// along the network and memories are trimmed. `order` permutes the order in
// which agents are processed; it never affects the result.
OrgState step_organization(const OrgState& prev, std::span<const AgentSpec> agents,
                           std::span<NormMemory> memories, const Landscape& lsc,
                           const RingNetwork& network, int t, std::span<Engine> rngs,
                           std::span<const int> order = {});

/// Owns the evolving state of one simulation run.
class Organization {
 public:
  Organization(const Landscape& lsc, std::vector<AgentSpec> agents, RingNetwork network,
               int memory_span, OrgState initial, Seed agent_seed);

  // Advances one period; periods are numbered 1, 2, ...
  const OrgState& step();

  int period() const noexcept { return period_; }
  const OrgState& state() const noexcept { return state_; }
  std::span<const NormMemory> memories() const noexcept { return memories_; }

 private:
  const Landscape* lsc_;
  std::vector<AgentSpec> agents_;
  RingNetwork network_;
  std::vector<NormMemory> memories_;
  std::vector<Engine> rngs_;
  OrgState state_;
  int period_ = 0;
};

}  // namespace orgnorms
