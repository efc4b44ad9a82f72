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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Usage: acceptance_suite [output_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "msbcb/bidding_agent.h"
#include "msbcb/orchestrator.h"
#include "msbcb/property_suites.h"
#include "msbcb/sim_env.h"

namespace msbcb {
namespace {

// Pinned tolerances and limits.
constexpr std::uint64_t kSuiteSeed = 20240601;
constexpr int kKnapsackInstances = 1000;
constexpr double kKnapsackSeconds = 120.0;
constexpr double kEnumRatio = 0.99;
constexpr double kOracleSeconds = 300.0;
constexpr int kSeeds = 10;
constexpr double kQualityRatio = 0.90;
constexpr int kBanditWins = 9;
constexpr double kLearningSeconds = 1800.0;
constexpr double kBudgetTol = 0.02;
constexpr int kBudgetRun = 5;
constexpr int kRegretlessTuples = 100000;
constexpr double kRegretlessSeconds = 10.0;
constexpr int kMenus = 1000;
constexpr double kIdentityRelTol = 1e-12;
constexpr int kPopulations = 10;
constexpr double kOrderingRelTol = 1e-12;
constexpr double kDecompositionAbsTol = 1e-9;
constexpr int kDecompositionPeriods = 30;
constexpr double kSampleLevel = 0.90;
constexpr int kSampleWins = 8;

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void Report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

using Runs = std::map<std::string, std::map<std::uint64_t, std::vector<MetricsRecord>>>;

Runs GroupRuns(const std::vector<MetricsRecord>& records) {
  Runs runs;
  for (const MetricsRecord& r : records) runs[r.algo][r.seed].push_back(r);
  for (auto& [algo, by_seed] : runs) {
    for (auto& [seed, run] : by_seed) {
      std::sort(run.begin(), run.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
        return a.period < b.period;
      });
    }
  }
  return runs;
}

// Revenue a period could have earned within the budget.
double FeasibleRevenue(const MetricsRecord& r, double budget) {
  return r.cost > budget ? r.revenue * budget / r.cost : r.revenue;
}

void GreedyBound() {
  const GreedyBoundReport small =
      RunGreedyBoundSuite(kKnapsackInstances, kSuiteSeed, KnapsackFamily::kSmallItems);
  const GreedyBoundReport tight =
      RunGreedyBoundSuite(kKnapsackInstances, kSuiteSeed, KnapsackFamily::kTight);
  const double seconds = small.seconds + tight.seconds;
  Report(small.violations == 0 && tight.violations == 0 && seconds < kKnapsackSeconds,
         "greedy_lambda_bound",
         fmt::format("instances={}+{} violations={}+{} min_ratio={:.6f}/{:.6f} "
                     "seconds={:.1f}",
                     small.instances, tight.instances, small.violations,
                     tight.violations, small.min_ratio, tight.min_ratio, seconds));
}

void EnumVsOffline(const ExperimentConfig& config) {
  Stopwatch clock;
  const Population pop = BuildPopulation(config.env);
  const OracleValues o = ComputeOracles(pop, config);
  const double ratio = o.msbcb_enum.value / o.offline_value;
  const double seconds = clock.Seconds();
  Report(ratio >= kEnumRatio && seconds < kOracleSeconds, "enum_vs_offline",
         fmt::format("enum={:.2f} offline_upper={:.2f} error_bound={:.3g} "
                     "ratio={:.5f} seconds={:.1f}",
                     o.msbcb_enum.value, o.offline_value, o.offline_bound, ratio,
                     seconds));
}

void LearningCriteria(const ExperimentConfig& base, const std::string& out_dir) {
  ExperimentConfig config = base;
  config.algorithms = {"msbcb", "contextual_bandit", "bid_grid_q"};
  config.n_seeds = kSeeds;
  config.metrics_path = out_dir + "/acceptance_metrics.csv";
  Stopwatch clock;
  const Runs runs = GroupRuns(RunExperiment(config));
  const double seconds = clock.Seconds();
  const auto& msbcb = runs.at("msbcb");
  const auto& bandit = runs.at("contextual_bandit");
  const auto& grid = runs.at("bid_grid_q");
  const double b = config.budget;

  double ratio_sum = 0.0;
  int wins = 0;
  int converged = 0;
  int faster = 0;
  std::string budget_detail;
  std::string sample_detail;
  for (const auto& [seed, run] : msbcb) {
    const MetricsRecord& last = run.back();
    ratio_sum += last.approx_ratio;
    if (last.revenue > bandit.at(seed).back().revenue) ++wins;

    int streak = 0;
    int first = -1;
    for (const MetricsRecord& r : run) {
      streak = std::abs(r.cost - b) <= kBudgetTol * b ? streak + 1 : 0;
      if (streak >= kBudgetRun && first < 0) first = r.period;
    }
    if (first > 0) ++converged;
    budget_detail += fmt::format(" {}", first > 0 ? std::to_string(first) : "never");

    const double level = kSampleLevel * FeasibleRevenue(last, b);
    auto samples_to = [&](const std::vector<MetricsRecord>& r) -> double {
      for (const MetricsRecord& m : r) {
        if (FeasibleRevenue(m, b) >= level) return static_cast<double>(m.n_samples);
      }
      return INFINITY;
    };
    const double mine = samples_to(run);
    const double theirs = samples_to(grid.at(seed));
    if (mine < theirs) ++faster;
    sample_detail += fmt::format(" {:.0f}/{:.0f}", mine, theirs);
  }
  const double mean_ratio = ratio_sum / static_cast<double>(msbcb.size());
  Report(mean_ratio >= kQualityRatio && wins >= kBanditWins && seconds < kLearningSeconds,
         "msbcb_learning_quality",
         fmt::format("seeds={} final_approx_mean={:.4f} wins_vs_bandit={} seconds={:.1f}",
                     msbcb.size(), mean_ratio, wins, seconds));
  Report(converged == static_cast<int>(msbcb.size()), "budget_convergence",
         fmt::format("seeds_converged={}/{} first_period_of_{}_in_band:{}", converged,
                     msbcb.size(), kBudgetRun, budget_detail));
  Report(faster >= kSampleWins, "sample_efficiency",
         fmt::format("seeds_faster={}/{} samples_msbcb/bid_grid:{}", faster,
                     msbcb.size(), sample_detail));
}

void RegretlessBid() {
  const RegretlessBidReport r = RunRegretlessBidSuite(kRegretlessTuples, kSuiteSeed);
  Report(r.violations == 0 && r.seconds < kRegretlessSeconds, "regretless_bid",
         fmt::format("tuples={} violations={} seconds={:.2f}", r.tuples, r.violations,
                     r.seconds));
}

void DistanceArgmax() {
  const DistanceArgmaxReport r = RunDistanceArgmaxSuite(kMenus, kSuiteSeed);
  Report(r.mismatches == 0 && r.max_identity_rel_error <= kIdentityRelTol,
         "distance_argmax",
         fmt::format("menus={} mismatches={} max_identity_rel_error={:.3g}", r.menus,
                     r.mismatches, r.max_identity_rel_error));
}

void Frontier() {
  const FrontierReport r = RunFrontierSuite(kMenus, kSuiteSeed);
  Report(r.violations == 0, "budget_frontier",
         fmt::format("menus={} violations={}", r.menus, r.violations));
}

void EnumVsMaxCpr(const ExperimentConfig& base) {
  int ordered = 0;
  int strict = 0;
  double best_gain = 0.0;
  for (int k = 0; k < kPopulations; ++k) {
    ExperimentConfig config = base;
    config.env.seed = base.env.seed + static_cast<std::uint64_t>(k);
    const OracleValues o = ComputeOracles(BuildPopulation(config.env), config);
    const double e = o.msbcb_enum.value;
    const double m = o.greedy_maxcpr.value;
    const double tol = kOrderingRelTol * std::max(1.0, std::abs(m));
    if (e >= m - tol) ++ordered;
    if (e > m + tol) ++strict;
    if (m > 0.0) best_gain = std::max(best_gain, e / m - 1.0);
  }
  Report(ordered == kPopulations && strict >= 1, "enum_vs_maxcpr",
         fmt::format("populations={} enum_ge_maxcpr={} strict={} max_gain={:.2f}%",
                     kPopulations, ordered, strict, 100.0 * best_gain));
}

void Decomposition(const ExperimentConfig& config) {
  const Population pop = BuildPopulation(config.env);
  double worst = 0.0;
  std::size_t entries = 0;
  for (AgentKind kind : {AgentKind::kMsbcb, AgentKind::kBidGridQ}) {
    LearningRun run(pop, config, kind, RunSeed(config.master_seed, 0));
    std::vector<Transition> log;
    run.set_transition_log(&log);
    for (int p = 0; p < kDecompositionPeriods; ++p) run.RunPeriod();
    const double thr = run.controller().cpr_thr();

    const ValueEstimator& trained = run.estimator();
    ValueEstimator split(config.agent.n_buckets, pop.config.T_max,
                         config.agent.max_displays, trained.n_actions(),
                         trained.learning_rate(), trained.gamma());
    ValueEstimator combined = split;
    for (const Transition& t : log) {
      split.TdUpdate(t);
      Transition c = t;
      c.value = t.value - thr * t.cost;
      c.cost = 0.0;
      combined.TdUpdate(c);
    }
    for (std::size_t si = 0; si < trained.n_states(); ++si) {
      const DiscreteState s = trained.StateAt(si);
      for (int a = 0; a < trained.n_actions(); ++a) {
        worst = std::max(worst, std::abs(trained.q_g(s, a) - split.q_g(s, a)));
        worst = std::max(worst, std::abs(trained.q_c(s, a) - split.q_c(s, a)));
        worst = std::max(worst, std::abs(CombinedQ(split, s, a, thr) -
                                         combined.q_g(s, a)));
        ++entries;
      }
    }
  }
  Report(worst <= kDecompositionAbsTol, "q_decomposition",
         fmt::format("entries={} max_abs_error={:.3g}", entries, worst));
}

}  // namespace
}  // namespace msbcb

int main(int argc, char** argv) {
  using namespace msbcb;
  const std::string out_dir =
      argc > 1 ? argv[1]
               : (std::filesystem::temp_directory_path() / "msbcb_acceptance").string();
  std::filesystem::create_directories(out_dir);

  const ExperimentConfig config;
  GreedyBound();
  EnumVsOffline(config);
  LearningCriteria(config, out_dir);
  RegretlessBid();
  DistanceArgmax();
  Frontier();
  EnumVsMaxCpr(config);
  Decomposition(config);
  std::cout << (failures == 0 ? "ALL PASS" : fmt::format("{} FAILED", failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
