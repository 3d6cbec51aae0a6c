#include <gtest/gtest.h>

#include "opdyn/analysis.hpp"
#include "opdyn/error.hpp"
#include "opdyn/spectral.hpp"
#include "opdyn/verify.hpp"

namespace opdyn {
namespace {

TEST(RandomSslss, ForcedTwoAgentGraph) {
  const auto g = random_sslss(2, 1.0, 1.0, 5);
  EXPECT_EQ(g.weights(), (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());
  EXPECT_TRUE(g.deviates(0, 1));
  EXPECT_TRUE(g.deviates(1, 0));
}

TEST(RandomSslss, SameSeedSameGraph) {
  const auto a = random_sslss(6, 0.5, 0.5, 99);
  const auto b = random_sslss(6, 0.5, 0.5, 99);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.relations(), b.relations());
}

TEST(RandomSslss, MembersOfTheClass) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto regime = static_cast<SignRegime>(seed % 4);
    const auto g = random_sslss(2 + static_cast<int>(seed % 8), 0.5, 0.5, regime, rng);
    EXPECT_TRUE(is_sslss(g)) << seed;
    EXPECT_TRUE(is_strongly_connected(g, all_agents(g.size())));
    if (regime == SignRegime::Opposition) EXPECT_TRUE(opposition_bipartition(g));
    if (regime == SignRegime::Reverse) EXPECT_TRUE(reverse_opposition_bipartition(g));
  }
}

TEST(RandomSslss, RejectsBadArguments) {
  EXPECT_THROW(random_sslss(1, 0.5, 0.5, 1), InputError);
  EXPECT_THROW(random_sslss(3, 0.0, 0.5, 1), InputError);
  EXPECT_THROW(random_sslss(3, 0.5, 1.5, 1), InputError);
}

TEST(RandomGraphs, ContinuousAndDiscreteAreValid) {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto c = random_continuous_graph(2 + k % 6, rng);
    EXPECT_TRUE(validate(c).ok());
    for (int i = 0; i < c.size(); ++i) EXPECT_EQ(c.weight(i, i), 0.0);
    const auto d = random_discrete_graph(k % 2 == 0, rng);
    EXPECT_TRUE(validate(d).ok());
    EXPECT_LE(d.size(), 3);
    EXPECT_LE(d.spectrum().size(), 3);
  }
}

TEST(BestResponse, ContinuousMatchesStep) {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto g = random_continuous_graph(2 + k % 5, rng);
    const auto b = random_opinions(g.spectrum(), g.size(), rng);
    const auto next = step_continuous(g, b);
    for (int i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(best_response_continuous(g, b, i), next[static_cast<std::size_t>(i)], 1e-10);
    }
  }
}

TEST(RunTrials, ZeroTrialsGiveAnEmptyReport) {
  TrialConfig config;
  config.trials = 0;
  const auto report = run_trials(config);
  EXPECT_EQ(report.trials, 0);
  EXPECT_TRUE(report.properties.empty());
  EXPECT_TRUE(report.ok());
}

TEST(RunTrials, SmallContinuousRunPasses) {
  TrialConfig config;
  config.trials = 60;
  config.seed = 3;
  const auto report = run_trials(config);
  EXPECT_TRUE(report.ok()) << report_to_json(config, report).dump(2);
  EXPECT_GT(report.passes("mainmain_simulation"), 0);
  EXPECT_GT(report.passes("lemma_dad"), 0);
  EXPECT_EQ(report.verdicts.size(), 3u);
}

TEST(RunTrials, SmallDiscreteRunPasses) {
  TrialConfig config;
  config.rule = UpdateRule::Discrete;
  config.trials = 40;
  const auto report = run_trials(config);
  EXPECT_TRUE(report.ok()) << report_to_json(config, report).dump(2);
  EXPECT_EQ(report.passes("lim_eq_fix"), 40);
  EXPECT_EQ(report.passes("best_response_discrete"), 20);
}

TEST(RunTrials, DeterministicAcrossThreadCounts) {
  TrialConfig config;
  config.trials = 40;
  config.seed = 7;
  config.threads = 1;
  const json one = report_to_json(config, run_trials(config));
  config.threads = 4;
  const json four = report_to_json(config, run_trials(config));
  EXPECT_EQ(one["properties"], four["properties"]);
  EXPECT_EQ(one["verdicts"], four["verdicts"]);
  EXPECT_EQ(one["counterexamples"], four["counterexamples"]);
}

TEST(RunTrials, CounterexamplesReplayAndLoad) {
  // an impossible tolerance forces failures so the dump path is exercised
  TrialConfig config;
  config.trials = 20;
  config.seed = 11;
  config.tol.limit = 0.0;
  const auto report = run_trials(config);
  ASSERT_FALSE(report.ok());
  const auto& first = report.counterexamples.front();
  const Scenario sc = scenario_from_json(first.scenario);
  EXPECT_TRUE(validate(sc.graph).ok());
  EXPECT_FALSE(sc.initial.empty());

  config.only_trial = first.trial;
  const auto replay = run_trials(config);
  ASSERT_FALSE(replay.ok());
  EXPECT_EQ(replay.counterexamples.front().property, first.property);
  EXPECT_EQ(replay.counterexamples.front().detail, first.detail);
  EXPECT_EQ(replay.counterexamples.front().scenario, first.scenario);
}

}  // namespace
}  // namespace opdyn
