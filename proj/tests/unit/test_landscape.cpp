#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "brute_force.hpp"
#include "orgnorms/landscape.hpp"
#include "orgnorms/landscape_io.hpp"

namespace orgnorms {
namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Entries of agent p's tables, position-major.
std::vector<double> agent_tables(const Landscape& lsc, int p) {
  std::vector<double> out;
  for (int n = 0; n < lsc.N(); ++n) {
    auto t = lsc.table(p * lsc.N() + n);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

Landscape constant_landscape(int N, int P, Coupling c, double value) {
  auto s = build_structure(N, P, c);
  const std::size_t configs = std::size_t{1} << (1 + c.degree());
  return Landscape(s, 0.0, 0, std::vector<double>(configs * static_cast<std::size_t>(N * P), value));
}

TEST(BuildStructure, InternalOnlyCouplesWholeBlock) {
  const auto s = build_structure(4, 4, {3, 0, 0});
  for (int i = 0; i < 16; ++i) {
    auto d = s.deps(i);
    std::set<int> got(d.begin(), d.end());
    std::set<int> want;
    for (int j = (i / 4) * 4; j < (i / 4) * 4 + 4; ++j) {
      if (j != i) want.insert(j);
    }
    EXPECT_EQ(got, want) << "task " << i;
  }
}

TEST(BuildStructure, NoCouplingMeansNoDeps) {
  const auto s = build_structure(4, 4, {0, 0, 0});
  for (int i = 0; i < 16; ++i) EXPECT_TRUE(s.deps(i).empty());
}

TEST(BuildStructure, HighCouplingReachesEveryOtherTask) {
  const auto s = build_structure(4, 4, {3, 4, 3});
  for (int i = 0; i < 16; ++i) {
    auto d = s.deps(i);
    ASSERT_EQ(d.size(), 15U);
    std::set<int> got(d.begin(), d.end());
    EXPECT_EQ(got.size(), 15U);
    EXPECT_FALSE(got.count(i));
  }
}

TEST(BuildStructure, InvariantsHoldForAllValidParameters) {
  for (int N = 1; N <= 4; ++N) {
    for (int P = 1; P <= 5 && N * P <= kMaxTasks; ++P) {
      for (int K = 0; K < N; ++K) {
        for (int C = 0; C <= N; ++C) {
          for (int S = 0; S < P; ++S) {
            const auto s = build_structure(N, P, {K, C, S});
            const int M = N * P;
            for (int i = 0; i < M; ++i) {
              auto d = s.deps(i);
              ASSERT_EQ(static_cast<int>(d.size()), K + C * S);
              std::set<int> uniq(d.begin(), d.end());
              EXPECT_EQ(uniq.size(), d.size());
              EXPECT_FALSE(uniq.count(i));
              const int p = i / N;
              EXPECT_EQ(std::count_if(d.begin(), d.end(), [&](int j) { return j / N == p; }), K);
              std::set<int> external_agents;
              for (int j : d) {
                if (j / N != p) external_agents.insert(j / N);
              }
              EXPECT_EQ(static_cast<int>(external_agents.size()), C > 0 ? S : 0);
              for (int q : external_agents) {
                EXPECT_EQ(std::count_if(d.begin(), d.end(), [&](int j) { return j / N == q; }), C);
              }
              // Block rotation maps the pattern onto itself.
              const int shift = N;
              auto rotated = s.deps((i + shift) % M);
              for (std::size_t k = 0; k < d.size(); ++k) {
                EXPECT_EQ(rotated[k], (d[k] + shift) % M);
              }
              // Matches the oracle's independent construction.
              const auto expected = oracle::deps(i, N, P, K, C, S);
              EXPECT_TRUE(std::equal(d.begin(), d.end(), expected.begin(), expected.end()));
            }
          }
        }
      }
    }
  }
}

TEST(BuildStructure, RejectsOutOfBoundParameters) {
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message([] { build_structure(4, 4, {4, 0, 0}); }).find("K < N"), std::string::npos);
  EXPECT_NE(message([] { build_structure(4, 4, {-1, 0, 0}); }).find("0 <= K"), std::string::npos);
  EXPECT_NE(message([] { build_structure(4, 4, {0, 5, 1}); }).find("C <= N"), std::string::npos);
  EXPECT_NE(message([] { build_structure(4, 4, {0, 1, 4}); }).find("S < P"), std::string::npos);
  EXPECT_NE(message([] { build_structure(5, 5, {0, 0, 0}); }).find("M = N*P <= 24"), std::string::npos);
}

TEST(SampleLandscape, EntriesAreUniformRange) {
  const auto lsc = sample_landscape(build_structure(4, 4, {2, 2, 2}), 0.3, 11);
  for (double v : lsc.tables()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(SampleLandscape, FullCorrelationGivesIdenticalTables) {
  const auto lsc = sample_landscape(build_structure(4, 4, {1, 1, 1}), 1.0, 5);
  const auto first = agent_tables(lsc, 0);
  for (int p = 1; p < 4; ++p) EXPECT_EQ(agent_tables(lsc, p), first);
}

class CorrelationFidelity : public ::testing::TestWithParam<double> {};

TEST_P(CorrelationFidelity, RealizedPearsonWithinTolerance) {
  const double rho = GetParam();
  // 4 positions x 2^16 configurations = 262144 pairs per agent pair.
  const auto lsc = sample_landscape(build_structure(4, 4, {3, 4, 3}), rho, 99);
  for (int p = 0; p < 4; ++p) {
    for (int q = p + 1; q < 4; ++q) {
      const auto a = agent_tables(lsc, p);
      const auto b = agent_tables(lsc, q);
      ASSERT_GE(a.size(), 10000U);
      EXPECT_NEAR(pearson(a, b), rho, 0.05) << "agents " << p << "," << q;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Rhos, CorrelationFidelity, ::testing::Values(0.0, 0.3, 0.7));

TEST(SampleLandscape, LatentCorrelationEndpoints) {
  EXPECT_EQ(latent_correlation(0.0), 0.0);
  EXPECT_EQ(latent_correlation(1.0), 1.0);
  EXPECT_NEAR(latent_correlation(0.3), 2.0 * std::sin(M_PI * 0.3 / 6.0), 1e-15);
}

TEST(SampleLandscape, RejectsRhoOutsideUnitInterval) {
  const auto s = build_structure(2, 2, {0, 0, 0});
  EXPECT_THROW(sample_landscape(s, -0.1, 1), std::invalid_argument);
  EXPECT_THROW(sample_landscape(s, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(sample_landscape(s, std::nan(""), 1), std::invalid_argument);
}

TEST(SampleLandscape, DeterministicForSeed) {
  const auto s = build_structure(4, 4, {2, 2, 2});
  const auto a = sample_landscape(s, 0.3, 42);
  const auto b = sample_landscape(s, 0.3, 42);
  const auto c = sample_landscape(s, 0.3, 43);
  EXPECT_TRUE(std::equal(a.tables().begin(), a.tables().end(), b.tables().begin(), b.tables().end()));
  EXPECT_EQ(a.global_max(), b.global_max());
  EXPECT_EQ(a.argmax_state(), b.argmax_state());
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_NE(a.digest(), c.digest());
}

TEST(Contribution, SeparableDependsOnOwnBitOnly) {
  const auto lsc = sample_landscape(build_structure(4, 4, {0, 0, 0}), 0.3, 3);
  std::mt19937 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    OrgState x(16, gen());
    for (int i = 0; i < 16; ++i) {
      const double v = contribution(lsc, i, x);
      for (int j = 0; j < 16; ++j) {
        if (j == i) continue;
        OrgState y = x;
        y.flip(j);
        EXPECT_EQ(contribution(lsc, i, y), v);
      }
    }
  }
}

TEST(Contribution, FlippingADependencyChangesTheLookup) {
  const auto lsc = sample_landscape(build_structure(4, 4, {1, 1, 1}), 0.3, 3);
  const OrgState x(16, 0xA5C3U);
  for (int i = 0; i < 16; ++i) {
    for (int j : lsc.structure().deps(i)) {
      OrgState y = x;
      y.flip(j);
      EXPECT_NE(lsc.structure().config_index(i, x), lsc.structure().config_index(i, y));
      EXPECT_NE(contribution(lsc, i, x), contribution(lsc, i, y));
    }
  }
}

TEST(Contribution, HighComplexityDependsOnAllBits) {
  const auto lsc = sample_landscape(build_structure(4, 4, {3, 4, 3}), 0.3, 8);
  const OrgState x(16, 0x1234U);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      OrgState y = x;
      y.flip(j);
      EXPECT_NE(contribution(lsc, i, x), contribution(lsc, i, y)) << i << " " << j;
    }
  }
}

TEST(Contribution, IndexOutOfRangeThrows) {
  const auto lsc = constant_landscape(2, 2, {0, 0, 0}, 0.5);
  EXPECT_THROW(contribution(lsc, 4, OrgState(4, 0)), std::out_of_range);
  EXPECT_THROW(agent_performance(lsc, 2, OrgState(4, 0)), std::out_of_range);
}

TEST(AgentPerformance, ConstantTables) {
  const auto lsc = constant_landscape(4, 4, {1, 1, 1}, 0.5);
  for (int p = 0; p < 4; ++p) EXPECT_EQ(agent_performance(lsc, p, OrgState(16, 0x0F0FU)), 0.5);
}

TEST(AgentPerformance, SingleTaskEqualsContribution) {
  const auto lsc = sample_landscape(build_structure(1, 4, {0, 1, 2}), 0.3, 2);
  const OrgState x(4, 0b1010U);
  for (int p = 0; p < 4; ++p) EXPECT_EQ(agent_performance(lsc, p, x), contribution(lsc, p, x));
}

TEST(AgentPerformance, SmallInstanceMatchesHandExpansion) {
  // P=2, N=2, K=1, C=1, S=1: task i depends on its block neighbour and on
  // the same position in the other block.
  const auto lsc = sample_landscape(build_structure(2, 2, {1, 1, 1}), 0.3, 17);
  const std::size_t configs = lsc.configs_per_task();
  ASSERT_EQ(configs, 8U);
  auto entry = [&](int i, int own, int internal, int external) {
    return lsc.tables()[static_cast<std::size_t>(i) * configs +
                        static_cast<std::size_t>(own + 2 * internal + 4 * external)];
  };
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    const OrgState x(4, bits);
    const int x0 = x.bit(0), x1 = x.bit(1), x2 = x.bit(2), x3 = x.bit(3);
    const double agent0 = (entry(0, x0, x1, x2) + entry(1, x1, x0, x3)) / 2.0;
    const double agent1 = (entry(2, x2, x3, x0) + entry(3, x3, x2, x1)) / 2.0;
    EXPECT_EQ(agent_performance(lsc, 0, x), agent0);
    EXPECT_EQ(agent_performance(lsc, 1, x), agent1);
  }
}

TEST(OrgPerformance, SingleAgentEqualsAgentPerformance) {
  const auto lsc = sample_landscape(build_structure(4, 1, {2, 0, 0}), 0.3, 4);
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    EXPECT_EQ(org_performance(lsc, OrgState(4, bits)), agent_performance(lsc, 0, OrgState(4, bits)));
  }
}

TEST(OrgPerformance, ConstantAgentsGiveThatValue) {
  const auto lsc = constant_landscape(4, 4, {2, 2, 2}, 0.25);
  EXPECT_EQ(org_performance(lsc, OrgState(16, 0xBEEFU)), 0.25);
}

TEST(OrgPerformance, EqualsMeanOfAllContributions) {
  const auto lsc = sample_landscape(build_structure(4, 4, {2, 2, 2}), 0.3, 6);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const OrgState x(16, gen());
    double flat = 0.0;
    for (int i = 0; i < 16; ++i) flat += contribution(lsc, i, x);
    flat /= 16.0;
    double two_level = 0.0;
    for (int p = 0; p < 4; ++p) two_level += agent_performance(lsc, p, x);
    two_level /= 4.0;
    EXPECT_EQ(org_performance(lsc, x), two_level);
    EXPECT_NEAR(org_performance(lsc, x), flat, 1e-15);
  }
}

TEST(OrgPerformance, SingleFlipOnlyTouchesDependentContributions) {
  const auto lsc = sample_landscape(build_structure(4, 4, {1, 1, 1}), 0.3, 10);
  const auto& s = lsc.structure();
  std::mt19937 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const OrgState x(16, gen());
    for (int j = 0; j < 16; ++j) {
      OrgState y = x;
      y.flip(j);
      for (int i = 0; i < 16; ++i) {
        auto d = s.deps(i);
        const bool affected = i == j || std::find(d.begin(), d.end(), j) != d.end();
        if (!affected) EXPECT_EQ(contribution(lsc, i, x), contribution(lsc, i, y));
      }
    }
  }
}

TEST(GlobalMax, SeparableClosedForm) {
  const auto lsc = sample_landscape(build_structure(4, 4, {0, 0, 0}), 0.3, 21);
  double expected = 0.0;
  for (int i = 0; i < 16; ++i) expected += std::max(lsc.table(i)[0], lsc.table(i)[1]);
  expected /= 16.0;
  EXPECT_NEAR(lsc.global_max(), expected, 1e-15);
  EXPECT_EQ(org_performance(lsc, lsc.argmax_state()), lsc.global_max());
  for (int i = 0; i < 16; ++i) {
    const int best = lsc.table(i)[1] > lsc.table(i)[0] ? 1 : 0;
    EXPECT_EQ(lsc.argmax_state().bit(i), best);
  }
}

TEST(GlobalMax, ConstantTables) {
  const auto lsc = constant_landscape(4, 4, {3, 4, 3}, 0.7);
  EXPECT_EQ(lsc.global_max(), 0.7);
  EXPECT_EQ(org_performance(lsc, OrgState(16, 0x5555U)), lsc.global_max());
}

TEST(GlobalMax, DominatesRandomStatesAndMatchesBruteForce) {
  const auto lsc = sample_landscape(build_structure(4, 4, {2, 2, 2}), 0.3, 31);
  std::mt19937 gen(4);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_LE(org_performance(lsc, OrgState(16, gen())), lsc.global_max());
  }
  const oracle::Model model(lsc);
  double best = -1.0;
  for (std::uint32_t bits = 0; bits < (1U << 16); ++bits) {
    best = std::max(best, model.org(oracle::unpack(bits, 16)));
  }
  EXPECT_EQ(lsc.global_max(), best);
  EXPECT_EQ(compute_global_max(lsc).value, best);
  EXPECT_EQ(compute_global_max(lsc).state, lsc.argmax_state());
}

TEST(GlobalMax, BoundsChain) {
  const auto lsc = sample_landscape(build_structure(4, 4, {3, 4, 3}), 0.3, 12);
  std::mt19937 gen(5);
  for (int k = 0; k < 200; ++k) {
    const OrgState x(16, gen());
    for (int i = 0; i < 16; ++i) {
      const double c = contribution(lsc, i, x);
      ASSERT_TRUE(c >= 0.0 && c <= 1.0);
    }
    const double v = org_performance(lsc, x);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, lsc.global_max());
  }
  EXPECT_LE(lsc.global_max(), 1.0);
}

TEST(LandscapeIo, RoundTripIsBitExact) {
  const auto lsc = sample_landscape(build_structure(4, 4, {1, 1, 1}), 0.3, 77);
  std::stringstream buf;
  save_landscape(lsc, buf);
  const auto back = load_landscape(buf);
  EXPECT_EQ(back.N(), 4);
  EXPECT_EQ(back.P(), 4);
  EXPECT_EQ(back.structure().coupling(), lsc.structure().coupling());
  EXPECT_EQ(back.seed(), lsc.seed());
  EXPECT_EQ(double_bits(back.rho()), double_bits(lsc.rho()));
  ASSERT_EQ(back.tables().size(), lsc.tables().size());
  for (std::size_t k = 0; k < lsc.tables().size(); ++k) {
    ASSERT_EQ(double_bits(back.tables()[k]), double_bits(lsc.tables()[k]));
  }
  EXPECT_EQ(double_bits(back.global_max()), double_bits(lsc.global_max()));
  EXPECT_EQ(back.argmax_state(), lsc.argmax_state());

  std::stringstream again;
  save_landscape(back, again);
  EXPECT_EQ(again.str(), buf.str());
}

TEST(LandscapeIo, RejectsCorruptFiles) {
  const auto lsc = sample_landscape(build_structure(2, 2, {1, 0, 0}), 0.3, 1);
  std::stringstream buf;
  save_landscape(lsc, buf);
  std::string bytes = buf.str();

  std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(load_landscape(truncated), std::runtime_error);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream bm(bad_magic);
  EXPECT_THROW(load_landscape(bm), std::runtime_error);

  // Tamper with the stored maximum (8 bytes before the 4-byte argmax).
  std::string bad_max = bytes;
  bad_max[bad_max.size() - 12] ^= 0x01;
  std::stringstream bx(bad_max);
  EXPECT_THROW(load_landscape(bx), std::runtime_error);
}

}  // namespace
}  // namespace orgnorms
