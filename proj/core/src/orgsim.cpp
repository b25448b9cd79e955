#include "orgnorms/orgsim.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace orgnorms {

std::uint32_t social_bits(std::uint32_t block, int N, int Ns) noexcept {
  if (Ns <= 0) return 0U;
  return (block >> (N - Ns)) & ((1U << Ns) - 1U);
}

void NormMemory::evict(int t) {
  while (!entries_.empty() && entries_.front().period <= t - span_) {
    entries_.pop_front();
  }
}

RingNetwork ring_network(int P, int D) {
  if (D != 2) {
    throw std::invalid_argument("ring network supports degree D = 2 only (D = " + std::to_string(D) + ")");
  }
  if (P < 3) {
    throw std::invalid_argument("ring network requires P >= 3 (P = " + std::to_string(P) + ")");
  }
  RingNetwork net;
  net.degree_ = D;
  net.receivers_.resize(static_cast<std::size_t>(P));
  net.senders_.resize(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) {
    const int prev = (p + P - 1) % P;
    const int next = (p + 1) % P;
    net.receivers_[static_cast<std::size_t>(p)] = {prev, next};
    net.senders_[static_cast<std::size_t>(p)] = {prev, next};
  }
  return net;
}

double residual_performance(const Landscape& lsc, int p, const OrgState& x) {
  const int P = lsc.P();
  if (P < 2) {
    throw std::invalid_argument("residual performance is undefined for a single agent");
  }
  double sum = 0.0;
  for (int q = 0; q < P; ++q) {
    if (q != p) sum += agent_performance(lsc, q, x);
  }
  return sum / (P - 1);
}

double incentive(const AgentSpec& spec, const Landscape& lsc, const OrgState& x) {
  const double own = agent_performance(lsc, spec.index, x);
  if (spec.beta == 0.0) {
    return spec.alpha * own;
  }
  return spec.alpha * own + spec.beta * residual_performance(lsc, spec.index, x);
}

double norm_compliance(const NormMemory& mem, std::uint32_t bits, int Ns, int t) {
  if (t <= mem.span() || mem.empty() || Ns <= 0) {
    return 0.0;
  }
  const std::uint32_t mask = (1U << Ns) - 1U;
  long matches = 0;
  for (const auto& e : mem.entries()) {
    matches += Ns - std::popcount((bits ^ e.bits) & mask);
  }
  return static_cast<double>(matches) / (static_cast<double>(Ns) * static_cast<double>(mem.size()));
}

std::uint32_t propose_candidate(std::uint32_t own_prev, int N, Engine& rng) {
  std::uniform_int_distribution<int> position(0, N - 1);
  return own_prev ^ (1U << position(rng));
}

Underachievement underachievements(const AgentSpec& spec, const Landscape& lsc,
                                   const NormMemory& mem, const OrgState& option, int t) {
  const int N = lsc.N();
  const std::uint32_t soc = social_bits(option.block(spec.index, N), N, spec.social_tasks);
  const double compliance = norm_compliance(mem, soc, spec.social_tasks, t);
  const double inc = incentive(spec, lsc, option);
  return {std::max(spec.g_soc - compliance, 0.0), std::max(spec.g_inc - inc, 0.0)};
}

std::uint32_t decide(const AgentSpec& spec, const Landscape& lsc, const NormMemory& mem,
                     std::uint32_t status_quo, std::uint32_t candidate,
                     const OrgState& others_prev, int t) {
  if (candidate == status_quo) {
    return status_quo;
  }
  const int N = lsc.N();
  auto score = [&](std::uint32_t block) {
    const auto d = underachievements(spec, lsc, mem, others_prev.with_block(spec.index, N, block), t);
    return spec.w_soc * d.social + spec.w_inc * d.incentive;
  };
  return score(candidate) < score(status_quo) ? candidate : status_quo;
}

OrgState step_organization(const OrgState& prev, std::span<const AgentSpec> agents,
                           std::span<NormMemory> memories, const Landscape& lsc,
                           const RingNetwork& network, int t, std::span<Engine> rngs,
                           std::span<const int> order) {
  const int P = lsc.P();
  const int N = lsc.N();
  std::vector<std::uint32_t> chosen(static_cast<std::size_t>(P));
  auto process = [&](int p) {
    const auto& spec = agents[static_cast<std::size_t>(p)];
    const std::uint32_t status_quo = prev.block(p, N);
    const std::uint32_t candidate = propose_candidate(status_quo, N, rngs[static_cast<std::size_t>(p)]);
    chosen[static_cast<std::size_t>(p)] =
        decide(spec, lsc, memories[static_cast<std::size_t>(p)], status_quo, candidate, prev, t);
  };
  if (order.empty()) {
    for (int p = 0; p < P; ++p) process(p);
  } else {
    for (int p : order) process(p);
  }

  OrgState next = prev;
  for (int p = 0; p < P; ++p) {
    next = next.with_block(p, N, chosen[static_cast<std::size_t>(p)]);
  }

  for (int p = 0; p < P; ++p) {
    const int Ns = agents[static_cast<std::size_t>(p)].social_tasks;
    const std::uint32_t shared = social_bits(chosen[static_cast<std::size_t>(p)], N, Ns);
    for (int r : network.receivers(p)) {
      memories[static_cast<std::size_t>(r)].receive({p, shared, t});
    }
  }
  for (auto& mem : memories) {
    mem.evict(t);
  }
  return next;
}

Organization::Organization(const Landscape& lsc, std::vector<AgentSpec> agents, RingNetwork network,
                           int memory_span, OrgState initial, Seed agent_seed)
    : lsc_(&lsc),
      agents_(std::move(agents)),
      network_(std::move(network)),
      memories_(agents_.size(), NormMemory(memory_span)),
      state_(initial) {
  if (static_cast<int>(agents_.size()) != lsc.P() || network_.agents() != lsc.P()) {
    throw std::invalid_argument("Organization: agent, network and landscape sizes disagree");
  }
  if (initial.size() != lsc.M()) {
    throw std::invalid_argument("Organization: initial state has the wrong length");
  }
  rngs_.reserve(agents_.size());
  for (std::size_t p = 0; p < agents_.size(); ++p) {
    rngs_.emplace_back(derive_seed(agent_seed, {kTagAgent, p}));
  }
}

const OrgState& Organization::step() {
  ++period_;
  state_ = step_organization(state_, agents_, memories_, *lsc_, network_, period_, rngs_);
  return state_;
}

}  // namespace orgnorms
