#include <gtest/gtest.h>

#include <random>

#include "opdyn/analysis.hpp"
#include "opdyn/error.hpp"
#include "opdyn/verify.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace opdyn {
namespace {

using test::matrix;

SignedMultigraph chain3() {
  return test::soft_graph(matrix({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}}), {"FFF", "FFF", "FFF"});
}

// Random directed graph with self-weight so every row has mass.
SignedMultigraph random_digraph(int n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd w(n, n);
  std::vector<std::string> rows;
  for (int i = 0; i < n; ++i) {
    std::string r;
    for (int j = 0; j < n; ++j) {
      w(i, j) = (i != j && u(rng) < density) ? 0.1 + u(rng) : 0.0;
      r += u(rng) < 0.5 ? 'D' : 'F';
    }
    if (w.row(i).sum() == 0.0 || u(rng) < 0.3) w(i, i) = 0.5;
    w.row(i) /= w.row(i).sum();
    rows.push_back(r);
  }
  return test::soft_graph(w, rows);
}

TEST(Scc, CompleteGraphIsOneComponent) {
  const auto g = test::soft_graph(test::uniform(4), {"FFFF", "FFFF", "FFFF", "FFFF"});
  const auto comps = strongly_connected_components(g);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0], all_agents(4));
}

TEST(Scc, ChainGivesSingletonsSinksFirst) {
  const auto comps = strongly_connected_components(chain3());
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0], (AgentSet{2}));
}

TEST(Scc, MixedGroupsPreset) {
  const auto comps = strongly_connected_components(test::preset("example_general").graph);
  auto sorted = comps;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<AgentSet>{{0, 1, 2}, {3, 4, 5, 6}, {7, 8, 9, 10}, {11}}));
}

TEST(Scc, MatchesTransitiveClosure) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_digraph(2 + trial % 9, 0.25, rng);
    const auto reach = oracle::transitive_closure(g);
    std::vector<int> comp(static_cast<std::size_t>(g.size()), -1);
    const auto comps = strongly_connected_components(g);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (int a : comps[c]) comp[static_cast<std::size_t>(a)] = static_cast<int>(c);
    }
    for (int i = 0; i < g.size(); ++i) {
      for (int j = 0; j < g.size(); ++j) {
        const bool mutual = reach(i, j) && reach(j, i);
        EXPECT_EQ(mutual, comp[static_cast<std::size_t>(i)] == comp[static_cast<std::size_t>(j)]);
      }
    }
    // sinks first: a component never reaches a later one
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (std::size_t d = c + 1; d < comps.size(); ++d) {
        EXPECT_FALSE(reach(comps[c].front(), comps[d].front()));
      }
    }
  }
}

TEST(StructurePartition, MixedGroupsPreset) {
  const auto p = structure_partition(test::preset("example_general").graph);
  EXPECT_EQ(p.groups, (std::vector<AgentSet>{{0, 1, 2}, {3, 4, 5, 6}, {7, 8, 9, 10}}));
  EXPECT_EQ(p.rest, (AgentSet{11}));
}

TEST(StructurePartition, ConnectedAndDisjointBlocks) {
  EXPECT_EQ(structure_partition(test::triangle('D')).groups.size(), 1u);
  EXPECT_TRUE(structure_partition(test::triangle('D')).rest.empty());
  const auto g = test::soft_graph(matrix({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}),
                                  {"FFFF", "FFFF", "FFFF", "FFFF"});
  const auto p = structure_partition(g);
  EXPECT_EQ(p.groups, (std::vector<AgentSet>{{0, 1}, {2, 3}}));
  EXPECT_TRUE(p.rest.empty());
  const auto c = structure_partition(chain3());
  EXPECT_EQ(c.groups, (std::vector<AgentSet>{{2}}));
  EXPECT_EQ(c.rest, (AgentSet{0, 1}));
}

TEST(Bipartition, TwoBlockPreset) {
  const auto cert = opposition_bipartition(test::preset("example_bip").graph);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->side1(), (AgentSet{0, 1}));
  EXPECT_EQ(cert->side2(), (AgentSet{2, 3}));
  EXPECT_FALSE(reverse_opposition_bipartition(test::preset("example_bip").graph));
}

TEST(Bipartition, AllFollowHasEmptySecondSide) {
  const auto cert = opposition_bipartition(test::triangle('F'));
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->side1(), all_agents(3));
  EXPECT_TRUE(cert->side2().empty());
  EXPECT_EQ(cert->signs(), (std::vector<int>{1, 1, 1}));
}

TEST(Bipartition, NegativeTriangleHasNone) {
  EXPECT_FALSE(opposition_bipartition(test::triangle('D')));
  EXPECT_FALSE(oracle::opposition_coloring_exists(test::triangle('D'), all_agents(3), false));
  EXPECT_TRUE(reverse_opposition_bipartition(test::triangle('D')));
  EXPECT_FALSE(reverse_opposition_bipartition(test::triangle('F')));
}

TEST(Bipartition, ReverseBlockPresets) {
  const auto cert = reverse_opposition_bipartition(test::preset("example_opp").graph);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->kind, BipartitionKind::ReverseOpposition);
  EXPECT_EQ(cert->side1(), (AgentSet{0, 1}));
  EXPECT_EQ(cert->side2(), (AgentSet{2, 3}));
  const auto g = test::preset("example_general").graph;
  EXPECT_TRUE(reverse_opposition_bipartition(g, {3, 4, 5, 6}));
  EXPECT_FALSE(opposition_bipartition(g, {3, 4, 5, 6}));
  EXPECT_FALSE(reverse_opposition_bipartition(g, {7, 8, 9, 10}));
  EXPECT_FALSE(opposition_bipartition(g, {7, 8, 9, 10}));
}

TEST(Bipartition, IgnoresRelationsOnZeroWeightPairs) {
  const auto g = test::soft_graph(matrix({{0, 0.5, 0.5}, {0.5, 0, 0.5}, {1, 0, 0}}), {"FFF", "FFF", "FDF"});
  EXPECT_TRUE(opposition_bipartition(g));
}

TEST(Bipartition, AgreesWithColoringOracle) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 400; ++trial) {
    const auto g = random_digraph(2 + trial % 7, 0.4, rng);
    const auto all = all_agents(g.size());
    const auto opp = opposition_bipartition(g);
    const auto rev = reverse_opposition_bipartition(g);
    EXPECT_EQ(opp.has_value(), oracle::opposition_coloring_exists(g, all, false)) << trial;
    EXPECT_EQ(rev.has_value(), oracle::opposition_coloring_exists(g, all, true)) << trial;
    if (opp) EXPECT_TRUE(certificate_holds(g, *opp));
    if (rev) EXPECT_TRUE(certificate_holds(g, *rev));
  }
}

TEST(KPartition, Examples) {
  const auto multi = test::preset("example_multiple").graph;
  EXPECT_TRUE(verify_k_partition(multi, {{0, 1, 2}, {3}, {4, 5}}));
  const auto bip = test::preset("example_bip").graph;
  EXPECT_TRUE(verify_k_partition(bip, {{0, 1}, {2, 3}}));
  EXPECT_FALSE(verify_k_partition(bip, {{0, 2}, {1, 3}}));
}

TEST(KPartition, MalformedPartitions) {
  const auto bip = test::preset("example_bip").graph;
  EXPECT_THROW(verify_k_partition(bip, {{0, 1}, {2}}), InputError);
  EXPECT_THROW(verify_k_partition(bip, {{0, 1}, {1, 2, 3}}), InputError);
  EXPECT_THROW(verify_k_partition(bip, {{0, 1}, {2, 3}, {}}), InputError);
  EXPECT_THROW(verify_k_partition(bip, {{0, 1}, {2, 3, 9}}), InputError);
}

TEST(Period, Examples) {
  EXPECT_EQ(period(test::triangle('D'), all_agents(3)), 1);
  const auto edge = test::soft_graph(matrix({{0, 1}, {1, 0}}), {"FF", "FF"});
  EXPECT_EQ(period(edge, all_agents(2)), 2);
  EXPECT_FALSE(is_aperiodic(edge, all_agents(2)));
  // two 4-cycles sharing an edge (bipartite six-node graph)
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
  const std::vector<std::pair<int, int>> edges = {{0, 1}, {0, 2}, {2, 3}, {1, 3}, {4, 5}, {2, 4}, {3, 5}};
  for (auto [i, j] : edges) w(i, j) = w(j, i) = 1;
  for (int i = 0; i < 6; ++i) w.row(i) /= w.row(i).sum();
  const auto six = test::soft_graph(w, std::vector<std::string>(6, "FFFFFF"));
  EXPECT_EQ(period(six, all_agents(6)), 2);
}

TEST(Period, SingleAgentAndErrors) {
  const auto c = chain3();
  EXPECT_EQ(period(c, {2}), 1);
  EXPECT_EQ(period(c, {1}), 0);
  EXPECT_THROW(period(c, all_agents(3)), InputError);
}

TEST(Period, MatchesClosedWalkOracle) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const auto g = random_digraph(2 + trial % 7, 0.35, rng);
    for (const auto& comp : strongly_connected_components(g)) {
      if (comp.size() < 2) continue;
      EXPECT_EQ(period(g, comp), oracle::period_by_walks(g, comp));
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Classify, MixedGroupsPreset) {
  const auto r = classify(test::preset("example_general").graph);
  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_EQ(r.groups[0].verdict, Verdict::Polarizes);
  EXPECT_EQ(r.groups[1].verdict, Verdict::Diverges);
  EXPECT_EQ(r.groups[2].verdict, Verdict::NeutralConsensus);
  EXPECT_EQ(r.rest, (AgentSet{11}));
  EXPECT_EQ(r.overall_converges, false);
  ASSERT_TRUE(r.groups[0].opposition);
  EXPECT_EQ(r.groups[0].opposition->side1(), (AgentSet{0}));
}

TEST(Classify, PositiveTrianglePolarizesDegenerately) {
  const auto r = classify(test::triangle('F'));
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].verdict, Verdict::Polarizes);
  EXPECT_TRUE(r.groups[0].opposition->side2().empty());
  EXPECT_EQ(r.overall_converges, true);
}

TEST(Classify, OutOfTheoryGroups) {
  const auto r = classify(test::preset("complex_society").graph);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_TRUE(r.groups[0].out_of_theory);
  EXPECT_FALSE(r.groups[0].verdict);
  EXPECT_FALSE(r.overall_converges);
}

TEST(Classify, PeriodicPairWithBothCertificatesDiverges) {
  const auto edge = test::soft_graph(matrix({{0, 1}, {1, 0}}), {"FD", "DF"});
  const auto r = classify(edge);
  EXPECT_EQ(r.groups[0].period, 2);
  EXPECT_TRUE(r.groups[0].opposition && r.groups[0].reverse);
  EXPECT_EQ(r.groups[0].verdict, Verdict::Diverges);
  EXPECT_EQ(r.overall_converges, false);
}

TEST(AnalysisProperties, FlipSwapsCertificateKinds) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto g = random_sslss(2 + static_cast<int>(seed % 7), 0.5, 0.5, static_cast<SignRegime>(seed % 4), rng);
    EXPECT_EQ(opposition_bipartition(g).has_value(), reverse_opposition_bipartition(g.flipped()).has_value());
    EXPECT_EQ(reverse_opposition_bipartition(g).has_value(), opposition_bipartition(g.flipped()).has_value());
  }
}

TEST(AnalysisProperties, PeriodTwoMeansBothOrNeither) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed + 1000);
    const auto g = random_sslss(2 + static_cast<int>(seed % 7), 0.4, 0.5, static_cast<SignRegime>(seed % 4), rng);
    const bool opp = opposition_bipartition(g).has_value();
    const bool rev = reverse_opposition_bipartition(g).has_value();
    if (period(g, all_agents(g.size())) == 2) {
      EXPECT_EQ(opp, rev);
    } else {
      EXPECT_FALSE(opp && rev);
    }
  }
}

}  // namespace
}  // namespace opdyn
