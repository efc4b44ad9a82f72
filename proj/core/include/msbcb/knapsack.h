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

#ifndef MSBCB_KNAPSACK_H_
#define MSBCB_KNAPSACK_H_

#include <string>
#include <vector>

namespace msbcb {

struct KnapsackItem {
  double value = 0.0;
  double cost = 0.0;
};

struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  double budget = 1.0;

  // Throws ContractError unless budget > 0 and all entries are finite and >= 0.
  void Validate() const;
};

struct KnapsackSolution {
  std::vector<int> selected;  // in pick order
  double total_value = 0.0;
  double total_cost = 0.0;
  // CPR of the last picked item; +inf when nothing was picked.
  double cpr_thr = 0.0;
  // 1 - max_i cost_i / B, or 0 when some item alone exceeds the budget.
  double lambda_cert = 0.0;
};

// value / cost with +inf for (v > 0, c = 0) and 0 for (0, 0).
double Cpr(double value, double cost);

// Item indices by CPR descending, ties by ascending index.
std::vector<int> CprOrder(const std::vector<KnapsackItem>& items);

// Stop-at-first-violation greedy by CPR. Zero-value items are never picked.
KnapsackSolution GreedySolve(const KnapsackInstance& instance);

struct ExactSolution {
  double value = 0.0;
  std::vector<int> selected;  // ascending
  double total_cost = 0.0;    // true (unrounded) cost of `selected`
  // Additive slack of `value` over the true optimum. Zero for the subset
  // enumeration path and whenever all costs lie on the resolution grid.
  double error_bound = 0.0;
  bool enumerated = false;
};

inline constexpr int kMaxEnumerationItems = 25;

// Exact optimum: everything-fits shortcut, subset enumeration for n <= 25,
// otherwise a 0-1 DP over costs rounded down to multiples of cost_resolution
// (so `value` is an upper bound of the optimum within `error_bound`).
// Throws ContractError for non-positive resolution.
ExactSolution ExactSolve(const KnapsackInstance& instance,
                         double cost_resolution);

// 1 - max_i cost_i / B. Throws CertificateError if some cost exceeds B.
double ApproximationLambda(const KnapsackInstance& instance);

// Online threshold rule: serve iff cpr >= cpr_thr.
bool SelectOnline(double cpr, double cpr_thr);

// CSV with a `# budget = <B>` header comment and one `value,cost` row per item.
KnapsackInstance ReadKnapsackCsv(const std::string& path);
void WriteKnapsackCsv(const std::string& path, const KnapsackInstance& instance);

}  // namespace msbcb

#endif  // MSBCB_KNAPSACK_H_
