// Copyright 2026 The MSBCB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "msbcb/orchestrator.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "msbcb/errors.h"
#include "test_util.h"

namespace msbcb {
namespace {

using ::msbcb::testing::ScratchDir;
using ::msbcb::testing::Slurp;
using ::msbcb::testing::TinyConfig;

UserPolicyMenu Menu(std::initializer_list<std::pair<double, double>> points) {
  UserPolicyMenu menu;
  std::uint32_t bits = 0;
  for (const auto& [g, c] : points) menu.evals.push_back(MakeEval(PolicySeq{bits++, 3}, g, c));
  return menu;
}

TEST(MsbcbEnumSolveTest, SingleUserSlackBudget) {
  const std::vector<UserPolicyMenu> menus{Menu({{0.0, 0.0}, {1.0, 0.4}, {1.8, 1.0}})};
  const GreedyPlan plan = MsbcbEnumSolve(menus, 5.0);
  EXPECT_DOUBLE_EQ(plan.value, 1.8);
  EXPECT_EQ(plan.choices, (std::vector<int>{2}));
}

TEST(MsbcbEnumSolveTest, BeatsMaxCprWhenRicherPolicyFits) {
  const std::vector<UserPolicyMenu> menus{Menu({{0.0, 0.0}, {1.0, 0.4}, {1.8, 1.0}}),
                                          Menu({{0.0, 0.0}, {0.5, 0.5}})};
  const GreedyPlan enumerated = MsbcbEnumSolve(menus, 1.0);
  const GreedyPlan max_cpr = GreedyMaxCprSolve(menus, 1.0);
  EXPECT_DOUBLE_EQ(enumerated.value, 1.8);
  EXPECT_DOUBLE_EQ(max_cpr.value, 1.5);
  EXPECT_LE(enumerated.cost, 1.0);
}

TEST(GreedyOverPoliciesTest, RespectsBudget) {
  const std::vector<UserPolicyMenu> menus{Menu({{0.0, 0.0}, {1.0, 0.4}}),
                                          Menu({{0.0, 0.0}, {1.8, 1.0}})};
  const GreedyPlan plan = GreedyOverPolicies(menus, {1, 1}, 1.0);
  EXPECT_EQ(plan.selected, (std::vector<int>{0}));
  EXPECT_DOUBLE_EQ(plan.cpr_thr, 2.5);
  EXPECT_EQ(plan.choices, (std::vector<int>{1, -1}));
}

TEST(ReplicateMenusTest, CopiesInOrder) {
  const std::vector<UserPolicyMenu> menus{Menu({{0.0, 0.0}}), Menu({{1.0, 1.0}})};
  const auto copies = ReplicateMenus(menus, 3);
  ASSERT_EQ(copies.size(), 6u);
  EXPECT_EQ(copies[3].evals.size(), 1u);
  EXPECT_EQ(copies[5].evals[0].v_g, 1.0);
}

TEST(LearningRunTest, FrozenControllerKeepsThreshold) {
  ExperimentConfig config = TinyConfig();
  config.pid.alpha1 = 0.0;
  config.pid.alpha2 = 0.0;
  const Population pop = BuildPopulation(config.env);
  LearningRun run(pop, config, AgentKind::kMsbcb, 3);
  const double before = run.controller().cpr_thr();
  const MetricsRecord rec = run.RunPeriod();
  EXPECT_EQ(run.controller().cpr_thr(), before);
  EXPECT_EQ(rec.cpr_thr, before);
  EXPECT_EQ(rec.period, 1);
}

TEST(LearningRunTest, SlackBudgetServesEveryPositiveCprUser) {
  ExperimentConfig config = TinyConfig();
  config.budget = 1e9;
  config.pid.initial_thr = 1e-9;
  config.pid.alpha1 = 0.0;
  config.pid.alpha2 = 0.0;
  const Population pop = BuildPopulation(config.env);
  LearningRun run(pop, config, AgentKind::kMsbcb, 5);
  for (int p = 0; p < 3; ++p) run.RunPeriod();
  int positive = 0;
  for (const UserState& user : pop.users) {
    if (user.horizon == 0) continue;
    const DiscreteState s = Discretize(user, pop.ad(), config.agent, pop.config.T_max);
    if (UserCprEstimate(run.estimator(), s).cpr > 0.0) ++positive;
  }
  ASSERT_GT(positive, 0);
  EXPECT_GE(run.RunPeriod().n_selected, positive * config.DaysPerPeriod());
}

TEST(LearningRunTest, FixedSeedReproduces) {
  const ExperimentConfig config = TinyConfig();
  const Population pop = BuildPopulation(config.env);
  LearningRun a(pop, config, AgentKind::kMsbcb, 11);
  LearningRun b(pop, config, AgentKind::kMsbcb, 11);
  for (int p = 0; p < 3; ++p) {
    const MetricsRecord x = a.RunPeriod();
    const MetricsRecord y = b.RunPeriod();
    EXPECT_EQ(x.revenue, y.revenue);
    EXPECT_EQ(x.cost, y.cost);
    EXPECT_EQ(x.n_samples, y.n_samples);
  }
}

TEST(LearningRunTest, DeterministicModeIsRejected) {
  ExperimentConfig config = TinyConfig();
  config.env.deterministic_mode = true;
  const Population pop = BuildPopulation(config.env);
  EXPECT_THROW(LearningRun(pop, config, AgentKind::kMsbcb, 1), ModeError);
}

TEST(LearningRunTest, TransitionLogMatchesSamples) {
  const ExperimentConfig config = TinyConfig();
  const Population pop = BuildPopulation(config.env);
  LearningRun run(pop, config, AgentKind::kMsbcb, 2);
  std::vector<Transition> log;
  run.set_transition_log(&log);
  const MetricsRecord rec = run.RunPeriod();
  EXPECT_EQ(static_cast<std::int64_t>(log.size()), rec.n_samples);
}

TEST(RunExperimentTest, ManualBidRowCount) {
  ExperimentConfig config = TinyConfig();
  config.algorithms = {"manual_bid"};
  config.metrics_path = (ScratchDir() / "m.csv").string();
  const auto records = RunExperiment(config);
  EXPECT_EQ(static_cast<int>(records.size()), config.n_periods);
}

TEST(RunExperimentTest, OracleRowsAndReproducibility) {
  ExperimentConfig config = TinyConfig();
  config.algorithms = {"msbcb", kOfflineOptimalAlgo, kMsbcbEnumAlgo};
  const auto dir = ScratchDir();
  config.metrics_path = (dir / "a.csv").string();
  const auto records = RunExperiment(config);
  config.metrics_path = (dir / "b.csv").string();
  RunExperiment(config);
  EXPECT_EQ(Slurp(dir / "a.csv"), Slurp(dir / "b.csv"));

  double offline = NAN;
  for (const MetricsRecord& r : records) {
    if (r.algo == kOfflineOptimalAlgo) {
      EXPECT_EQ(r.approx_ratio, 1.0);
      offline = r.revenue;
    }
  }
  for (const MetricsRecord& r : records) {
    if (r.algo == kMsbcbEnumAlgo) EXPECT_LE(r.revenue, offline);
    if (r.algo == "msbcb") EXPECT_NEAR(r.approx_ratio, r.revenue / offline, 1e-12);
  }
}

TEST(RunExperimentTest, UnwritablePathFailsBeforeSimulating) {
  ExperimentConfig config = TinyConfig();
  config.metrics_path = "/nonexistent_dir_for_msbcb/metrics.csv";
  EXPECT_THROW(RunExperiment(config), IoError);
}

TEST(MetricsCsvTest, RoundTripAndHeader) {
  const auto dir = ScratchDir();
  MetricsRecord r;
  r.algo = "msbcb";
  r.period = 2;
  r.seed = 18446744073709551615ull;
  r.revenue = 12.5;
  r.cost = 3.25;
  r.cpr_thr = 4.0;
  r.n_selected = 7;
  r.n_samples = 123;
  r.approx_ratio = NAN;
  WriteMetricsCsv((dir / "m.csv").string(), {r});
  const std::string text = Slurp(dir / "m.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "algo,period,seed,revenue,cost,cpr_thr,n_selected,n_samples,approx_ratio");
  const auto back = ReadMetricsCsv((dir / "m.csv").string());
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].seed, r.seed);
  EXPECT_EQ(back[0].revenue, 12.5);
  EXPECT_EQ(back[0].n_samples, 123);
  EXPECT_TRUE(std::isnan(back[0].approx_ratio));
}

TEST(MetricsCsvTest, WrongHeaderIsRejected) {
  const auto path = ScratchDir() / "bad.csv";
  ::msbcb::testing::Spit(path, "algo,period\nmsbcb,1\n");
  EXPECT_THROW(ReadMetricsCsv(path.string()), ConfigError);
}

std::vector<MetricsRecord> Curve(const std::string& algo, std::uint64_t seed,
                                 std::vector<double> revenue) {
  std::vector<MetricsRecord> out;
  for (std::size_t i = 0; i < revenue.size(); ++i) {
    MetricsRecord r;
    r.algo = algo;
    r.seed = seed;
    r.period = static_cast<int>(i) + 1;
    r.revenue = revenue[i];
    r.cost = 10.0;
    r.n_samples = 100 * r.period;
    r.approx_ratio = revenue[i] / 100.0;
    out.push_back(r);
  }
  return out;
}

TEST(ComputeSummaryTest, SingleRunHasZeroStd) {
  const Summary s = ComputeSummary(Curve("msbcb", 1, {10, 20, 30}), {});
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].revenue_mean, 30.0);
  EXPECT_EQ(s.rows[0].revenue_std, 0.0);
  EXPECT_EQ(s.rows[0].approx_ratio_std, 0.0);
}

TEST(ComputeSummaryTest, MeanAndStdAcrossSeeds) {
  auto records = Curve("msbcb", 1, {10, 20});
  const auto more = Curve("msbcb", 2, {10, 40});
  records.insert(records.end(), more.begin(), more.end());
  const Summary s = ComputeSummary(records, {});
  EXPECT_DOUBLE_EQ(s.rows[0].revenue_mean, 30.0);
  EXPECT_DOUBLE_EQ(s.rows[0].revenue_std, std::sqrt(200.0));
}

TEST(ComputeSummaryTest, Crossings) {
  auto records = Curve("msbcb", 1, {10, 20, 30});
  const auto slow = Curve("contextual_bandit", 1, {5, 6, 7});
  records.insert(records.end(), slow.begin(), slow.end());
  const Summary s = ComputeSummary(records, {1.0, 25.0});
  ASSERT_EQ(s.crossings.size(), 4u);
  EXPECT_EQ(s.crossings[0].period, 1);
  EXPECT_EQ(s.crossings[0].samples, 100.0);
  EXPECT_EQ(s.crossings[1].period, 3);
  EXPECT_EQ(s.crossings[2].period, 1);
  EXPECT_FALSE(s.crossings[3].period.has_value());

  const auto dir = ScratchDir();
  WriteCrossingsCsv((dir / "c.csv").string(), s);
  EXPECT_NE(Slurp(dir / "c.csv").find("contextual_bandit,25,n/a,n/a"), std::string::npos);
  WriteSummaryCsv((dir / "s.csv").string(), s);
  const std::string summary = Slurp(dir / "s.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "algo,revenue_mean,revenue_std,cost_mean,approx_ratio_mean,approx_ratio_std");
}

TEST(ComputeSummaryTest, EmptyInputThrows) {
  EXPECT_THROW(ComputeSummary({}, {}), ContractError);
}

TEST(FirstCrossingTest, EarliestPeriodWins) {
  const auto run = Curve("msbcb", 1, {10, 30, 20, 40});
  EXPECT_EQ(FirstCrossing(run, 25)->period, 2);
  EXPECT_FALSE(FirstCrossing(run, 50).has_value());
}

TEST(ExperimentConfigTest, Validation) {
  ExperimentConfig config;
  config.algorithms = {"nonsense"};
  EXPECT_THROW(config.Validate(), ConfigError);
  EXPECT_TRUE(IsKnownAlgorithm("bid_grid_q"));
  EXPECT_EQ(ExperimentConfig().DaysPerPeriod(), 10);
}

}  // namespace
}  // namespace msbcb
