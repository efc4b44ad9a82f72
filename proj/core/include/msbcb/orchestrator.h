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

#ifndef MSBCB_ORCHESTRATOR_H_
#define MSBCB_ORCHESTRATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msbcb/bidding_agent.h"
#include "msbcb/budget_control.h"
#include "msbcb/policy_oracle.h"
#include "msbcb/sim_env.h"

namespace msbcb {

struct ExperimentConfig {
  EnvConfig env;
  AgentConfig agent;
  PidConfig pid;
  double budget = 1500.0;  // per period
  int n_periods = 100;
  // A period replays the population episodes_per_period / n_users times
  // ("days"), each day from the initial user states.
  int episodes_per_period = 2000;
  std::vector<std::string> algorithms = {"msbcb"};
  std::string metrics_path = "metrics.csv";
  std::uint64_t master_seed = 1;
  int n_seeds = 1;
  // Oracle cost grid, as a fraction of the budget.
  double oracle_resolution = 1e-5;
  // Absolute revenue levels for the samples-to-level table; empty means
  // 50/75/90% of the offline optimum (or of the best final revenue).
  std::vector<double> revenue_levels;

  void Validate() const;
  int DaysPerPeriod() const;
};

inline constexpr const char* kMsbcbEnumAlgo = "msbcb_enum";
inline constexpr const char* kOfflineOptimalAlgo = "offline_optimal";

bool IsKnownAlgorithm(const std::string& name);

struct MetricsRecord {
  std::string algo;
  int period = 0;  // 1-based
  std::uint64_t seed = 0;
  double revenue = 0.0;
  double cost = 0.0;
  double cpr_thr = 0.0;
  int n_selected = 0;
  std::int64_t n_samples = 0;  // cumulative
  double approx_ratio = 0.0;   // NaN when no oracle is available
};

inline constexpr const char* kMetricsHeader =
    "algo,period,seed,revenue,cost,cpr_thr,n_selected,n_samples,approx_ratio";
inline constexpr const char* kSummaryHeader =
    "algo,revenue_mean,revenue_std,cost_mean,approx_ratio_mean,approx_ratio_std";

// --- Oracle solvers ------------------------------------------------------------

struct ThresholdSearch {
  int grid_points = 64;
  int bisection_steps = 20;
};

struct GreedyPlan {
  double cpr_thr = 0.0;
  double value = 0.0;
  double cost = 0.0;
  std::vector<int> selected;  // user (menu) indices, in pick order
  std::vector<int> choices;   // eval index per user; -1 = not served
};

// Greedy over users with per-user policies fixed by `choices`: CPR order,
// stop at the first budget violation.
GreedyPlan GreedyOverPolicies(const std::vector<UserPolicyMenu>& menus,
                              const std::vector<int>& choices, double budget);

// Threshold search over threshold-optimal policies: for each candidate thr every
// user takes BestPolicyForThreshold, users with CPR >= thr enter the greedy,
// and the best feasible value wins. Log grid + bisection on the spend crossing.
GreedyPlan MsbcbEnumSolve(const std::vector<UserPolicyMenu>& menus, double budget,
                          const ThresholdSearch& search = {});

// Same greedy, but each user keeps its CPR-maximizing policy.
GreedyPlan GreedyMaxCprSolve(const std::vector<UserPolicyMenu>& menus,
                             double budget);

// Concatenates `copies` copies of the menus (a multi-day period).
std::vector<UserPolicyMenu> ReplicateMenus(const std::vector<UserPolicyMenu>& menus,
                                           int copies);

// --- Online learning loop ------------------------------------------------------

// One algorithm/seed run of the bilevel loop on a fixed population.
class LearningRun {
 public:
  LearningRun(const Population& population, const ExperimentConfig& config,
              AgentKind kind, std::uint64_t seed,
              std::optional<double> offline_value = std::nullopt);

  // Collect a period of episodes with the current snapshot, then apply TD
  // updates and the threshold feedback.
  MetricsRecord RunPeriod();

  int period() const { return period_; }
  AgentKind kind() const { return kind_; }
  const ValueEstimator& estimator() const { return estimator_; }
  const PidController& controller() const { return controller_; }
  // Appends every applied transition, in update order. Not owned; may be null.
  void set_transition_log(std::vector<Transition>* log) { transition_log_ = log; }

 private:
  const Population* population_;
  ExperimentConfig config_;
  AgentKind kind_;
  std::uint64_t seed_;
  std::optional<double> offline_value_;
  ValueEstimator estimator_;
  PidController controller_;
  std::vector<Transition>* transition_log_ = nullptr;
  int period_ = 0;
  std::int64_t samples_ = 0;
};

// Seeds for run j (j = 0..n_seeds-1).
std::uint64_t RunSeed(std::uint64_t master_seed, int run);

struct OracleValues {
  double offline_value = 0.0;
  double offline_bound = 0.0;
  double offline_cost = 0.0;
  int offline_served = 0;
  GreedyPlan msbcb_enum;
  GreedyPlan greedy_maxcpr;
};

// Oracles on the period population (DaysPerPeriod copies of the users).
OracleValues ComputeOracles(const Population& population,
                            const ExperimentConfig& config);

// Runs every configured algorithm for every seed and writes the metrics CSV.
// Throws IoError before simulating when metrics_path is not writable.
std::vector<MetricsRecord> RunExperiment(const ExperimentConfig& config);

void WriteMetricsCsv(const std::string& path, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path);

// --- Summaries -------------------------------------------------------------------

struct SummaryRow {
  std::string algo;
  double revenue_mean = 0.0;
  double revenue_std = 0.0;
  double cost_mean = 0.0;
  double approx_ratio_mean = 0.0;
  double approx_ratio_std = 0.0;
};

struct CrossingRow {
  std::string algo;
  double level = 0.0;
  std::optional<int> period;
  std::optional<double> samples;
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<CrossingRow> crossings;
};

// Final-period statistics over seeds plus, for each level, the first period
// at which the seed-averaged revenue reaches it. Throws ContractError when
// `records` is empty.
Summary ComputeSummary(const std::vector<MetricsRecord>& records,
                       const std::vector<double>& revenue_levels);

// First record (by period) with revenue >= level, if any.
std::optional<MetricsRecord> FirstCrossing(const std::vector<MetricsRecord>& run,
                                           double level);

void WriteSummaryCsv(const std::string& path, const Summary& summary);
// `algo,level,period,samples` with "n/a" for unreached levels.
void WriteCrossingsCsv(const std::string& path, const Summary& summary);

}  // namespace msbcb

#endif  // MSBCB_ORCHESTRATOR_H_
