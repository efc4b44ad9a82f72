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

#ifndef MSBCB_POLICY_ORACLE_H_
#define MSBCB_POLICY_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msbcb/sim_env.h"

namespace msbcb {

// Open-loop display plan: bit t set means "display at step t". In the
// deterministic world the state is a function of the display prefix, so
// closed-loop policies collapse onto these.
struct PolicySeq {
  std::uint32_t bits = 0;
  int length = 0;

  bool display(int t) const { return (bits >> t) & 1u; }
  // '0'/'1' characters, step 0 first.
  std::string ToString() const;
  static PolicySeq FromString(const std::string& s);
};

// Lexicographic order of ToString().
bool PolicyLess(const PolicySeq& a, const PolicySeq& b);

struct PolicyEval {
  PolicySeq policy;
  double v_g = 0.0;
  double v_c = 0.0;
  double cpr = 0.0;  // Cpr(v_g, v_c)
};

PolicyEval MakeEval(PolicySeq policy, double v_g, double v_c);

struct UserPolicyMenu {
  int user_id = 0;
  std::vector<PolicyEval> evals;
};

// Largest T_max for which full enumeration is offered.
inline constexpr int kMaxEnumerableSteps = 12;

// Exact expectation by forward recursion with survival weighting, using the
// frozen second prices of the deterministic world. Throws ModeError unless
// config.deterministic_mode.
PolicyEval EvalPolicy(const UserState& user, const Ad& ad,
                      const PolicySeq& policy, const EnvConfig& config);

// Same recursion with caller-supplied per-step second prices.
PolicyEval EvalPolicyWithPrices(const UserState& user, const Ad& ad,
                                const PolicySeq& policy,
                                const EnvConfig& config,
                                std::span<const double> second_prices);

// All 2^T_max policies, index == bits. Throws ContractError when T_max exceeds
// kMaxEnumerableSteps.
UserPolicyMenu BuildMenu(const UserState& user, const Ad& ad,
                         const EnvConfig& config);

std::vector<UserPolicyMenu> BuildMenus(const Population& population);

// argmax v_g - thr * v_c; ties -> smaller v_c, then PolicyLess.
const PolicyEval& BestPolicyForThreshold(const UserPolicyMenu& menu,
                                         double cpr_thr);

// Highest CPR among evals with v_c > 0 (ties -> larger v_g). Falls back to the
// all-zeros policy when every eval is free.
const PolicyEval& MaxCprPolicy(const UserPolicyMenu& menu);

// For each budget b in the ascending grid, the v_g-maximal eval with v_c <= b.
std::vector<PolicyEval> BudgetFrontier(const UserPolicyMenu& menu,
                                       std::span<const double> budget_grid);

// Signed vertical distance of (v_c, v_g) to the line y = thr * x.
double VerticalDistance(const PolicyEval& eval, double cpr_thr);

// True iff the argmax of VerticalDistance (same tie-breaking) is the eval
// returned by BestPolicyForThreshold.
bool DistanceArgmaxAgrees(const UserPolicyMenu& menu, double cpr_thr);

struct OfflineSolution {
  // Upper bound of the optimum: the smaller of the rounded-down DP and the
  // LP relaxation bound.
  double total_value = 0.0;
  double total_cost = 0.0;   // true cost of `choices`
  // total_value minus the optimum with costs rounded up; the true optimum
  // lies within [total_value - error_bound, total_value].
  double error_bound = 0.0;
  // Feasible choices attaining total_value - error_bound: an index into
  // menus[i].evals per user, or empty when reconstruction was skipped.
  std::vector<int> choices;
};

// Multi-choice knapsack: every user contributes exactly one eval (the
// all-zeros policy means "not selected"), solved by DP on a cost grid of
// step cost_resolution. Choice reconstruction is skipped when its table
// would exceed ~64 MiB.
OfflineSolution OfflineOptimal(const std::vector<UserPolicyMenu>& menus,
                               double budget, double cost_resolution);

// `user_id,policy_bits,v_g,v_c` rows.
void WriteMenusCsv(const std::string& path,
                   const std::vector<UserPolicyMenu>& menus);
std::vector<UserPolicyMenu> ReadMenusCsv(const std::string& path);

}  // namespace msbcb

#endif  // MSBCB_POLICY_ORACLE_H_
