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


#include "msbcb/knapsack.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "msbcb/errors.h"

namespace msbcb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

KnapsackInstance Make(std::vector<KnapsackItem> items, double budget) {
  KnapsackInstance inst;
  inst.items = std::move(items);
  inst.budget = budget;
  return inst;
}

double BruteForce(const KnapsackInstance& inst) {
  const int n = static_cast<int>(inst.items.size());
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double v = 0.0;
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        v += inst.items[static_cast<std::size_t>(i)].value;
        c += inst.items[static_cast<std::size_t>(i)].cost;
      }
    }
    if (c <= inst.budget) best = std::max(best, v);
  }
  return best;
}

TEST(GreedySolveTest, EmptyInstance) {
  const KnapsackSolution sol = GreedySolve(Make({}, 5.0));
  EXPECT_TRUE(sol.selected.empty());
  EXPECT_EQ(sol.total_value, 0.0);
  EXPECT_EQ(sol.cpr_thr, kInf);
}

TEST(GreedySolveTest, FourItems) {
  const KnapsackInstance inst = Make({{10, 1}, {9, 3}, {4, 2}, {2, 2}}, 6.0);
  const KnapsackSolution sol = GreedySolve(inst);
  EXPECT_EQ(sol.selected, (std::vector<int>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(sol.total_value, 23.0);
  EXPECT_DOUBLE_EQ(sol.total_cost, 6.0);
  EXPECT_DOUBLE_EQ(sol.cpr_thr, 2.0);
  EXPECT_DOUBLE_EQ(BruteForce(inst), 23.0);
}

TEST(GreedySolveTest, ThresholdIsLastPickedRatio) {
  // Budget 8; users with CPR 10, 9, 7 fill it exactly, CPR 5 no longer fits.
  const KnapsackSolution sol = GreedySolve(Make({{27, 3}, {30, 3}, {5, 1}, {14, 2}}, 8.0));
  EXPECT_DOUBLE_EQ(sol.total_cost, 8.0);
  EXPECT_DOUBLE_EQ(sol.cpr_thr, 7.0);
  EXPECT_EQ(sol.selected, (std::vector<int>{1, 0, 3}));
}

TEST(GreedySolveTest, StopsAtFirstItemThatDoesNotFit) {
  const KnapsackSolution sol = GreedySolve(Make({{10, 5}, {6, 4}, {6, 4}}, 8.0));
  EXPECT_EQ(sol.selected, (std::vector<int>{0}));
  EXPECT_DOUBLE_EQ(sol.total_value, 10.0);
}

TEST(GreedySolveTest, RejectsInvalidInstance) {
  EXPECT_THROW(GreedySolve(Make({{1, 1}}, 0.0)), ContractError);
  EXPECT_THROW(GreedySolve(Make({{-1, 1}}, 1.0)), ContractError);
}

TEST(ExactSolveTest, Examples) {
  const ExactSolution a = ExactSolve(Make({{10, 5}, {6, 4}, {6, 4}}, 8.0), 1.0);
  EXPECT_DOUBLE_EQ(a.value, 12.0);
  EXPECT_EQ(a.selected, (std::vector<int>{1, 2}));
  EXPECT_EQ(ExactSolve(Make({{5, 3}}, 2.0), 1.0).value, 0.0);
  EXPECT_DOUBLE_EQ(ExactSolve(Make({{10, 1}, {9, 3}, {4, 2}, {2, 2}}, 6.0), 1.0).value,
                   23.0);
}

TEST(ExactSolveTest, MatchesBruteForceOnSmallInstances) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<KnapsackItem> items(1 + trial % 12);
    double total = 0.0;
    for (auto& item : items) {
      item.value = u(rng);
      item.cost = u(rng);
      total += item.cost;
    }
    const KnapsackInstance inst = Make(items, 0.4 * total + 1e-3);
    const ExactSolution sol = ExactSolve(inst, 1e-6);
    EXPECT_NEAR(sol.value, BruteForce(inst), 1e-9);
    EXPECT_LE(sol.total_cost, inst.budget + 1e-9);
  }
}

TEST(ExactSolveTest, DynamicProgramBracketsOptimum) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> cost(1, 50);
  std::uniform_int_distribution<int> value(1, 100);
  std::vector<KnapsackItem> items(60);
  double total = 0.0;
  for (auto& item : items) {
    item.cost = cost(rng);
    item.value = value(rng);
    total += item.cost;
  }
  const KnapsackInstance inst = Make(items, std::floor(0.5 * total));
  const ExactSolution sol = ExactSolve(inst, 1.0);
  EXPECT_FALSE(sol.enumerated);
  EXPECT_EQ(sol.error_bound, 0.0);
  EXPECT_LE(sol.total_cost, inst.budget);
  double v = 0.0;
  for (int i : sol.selected) v += items[static_cast<std::size_t>(i)].value;
  EXPECT_DOUBLE_EQ(v, sol.value);
  EXPECT_GE(sol.value, GreedySolve(inst).total_value);
}

TEST(ApproximationLambdaTest, Examples) {
  EXPECT_EQ(ApproximationLambda(Make({{1, 4}, {1, 2}}, 4.0)), 0.0);
  EXPECT_NEAR(ApproximationLambda(Make({{1, 0.001}}, 1.0)), 0.999, 1e-15);
  const KnapsackInstance inst = Make({{10, 5}, {6, 4}, {6, 4}}, 8.0);
  EXPECT_DOUBLE_EQ(ApproximationLambda(inst), 0.375);
  EXPECT_GE(GreedySolve(inst).total_value, 0.375 * ExactSolve(inst, 1.0).value);
  EXPECT_THROW(ApproximationLambda(Make({{1, 5}}, 4.0)), CertificateError);
}

TEST(SelectOnlineTest, Examples) {
  EXPECT_FALSE(SelectOnline(5.0, 7.0));
  EXPECT_TRUE(SelectOnline(7.0, 7.0));
  EXPECT_TRUE(SelectOnline(kInf, 1e300));
  EXPECT_EQ(Cpr(1.0, 0.0), kInf);
  EXPECT_EQ(Cpr(0.0, 0.0), 0.0);
}

TEST(KnapsackCsvTest, RoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "msbcb_knapsack_rt.csv";
  const KnapsackInstance inst = Make({{10, 1}, {9.25, 3}, {0, 2}}, 6.5);
  WriteKnapsackCsv(path.string(), inst);
  const KnapsackInstance back = ReadKnapsackCsv(path.string());
  ASSERT_EQ(back.items.size(), 3u);
  EXPECT_EQ(back.budget, 6.5);
  EXPECT_EQ(back.items[1].value, 9.25);
  EXPECT_EQ(back.items[2].cost, 2.0);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace msbcb
