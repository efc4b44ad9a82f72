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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "msbcb/knapsack.h"
#include "msbcb/orchestrator.h"
#include "msbcb/policy_oracle.h"
#include "msbcb/sim_env.h"

namespace msbcb {
namespace {

KnapsackInstance RandomInstance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cost(1, 50);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  KnapsackInstance inst;
  inst.items.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& item : inst.items) {
    item.cost = cost(rng);
    item.value = value(rng);
    total += item.cost;
  }
  inst.budget = 0.5 * total;
  return inst;
}

void BM_GreedySolve(benchmark::State& state) {
  const KnapsackInstance inst = RandomInstance(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(GreedySolve(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedySolve)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

void BM_ExactSolve(benchmark::State& state) {
  const KnapsackInstance inst = RandomInstance(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(ExactSolve(inst, 1.0));
}
BENCHMARK(BM_ExactSolve)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_BuildMenus(benchmark::State& state) {
  EnvConfig env;
  env.T_max = static_cast<int>(state.range(0));
  const Population pop = BuildPopulation(env);
  for (auto _ : state) benchmark::DoNotOptimize(BuildMenus(pop));
}
BENCHMARK(BM_BuildMenus)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_OfflineOptimal(benchmark::State& state) {
  const ExperimentConfig config;
  const auto menus = ReplicateMenus(BuildMenus(BuildPopulation(config.env)),
                                    static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        OfflineOptimal(menus, config.budget, config.budget * config.oracle_resolution));
  }
}
BENCHMARK(BM_OfflineOptimal)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MsbcbEnumSolve(benchmark::State& state) {
  const ExperimentConfig config;
  const auto menus = ReplicateMenus(BuildMenus(BuildPopulation(config.env)),
                                    config.DaysPerPeriod());
  for (auto _ : state) benchmark::DoNotOptimize(MsbcbEnumSolve(menus, config.budget));
}
BENCHMARK(BM_MsbcbEnumSolve)->Unit(benchmark::kMillisecond);

void BM_RunPeriod(benchmark::State& state) {
  const ExperimentConfig config;
  const Population pop = BuildPopulation(config.env);
  const auto kind = static_cast<AgentKind>(state.range(0));
  LearningRun run(pop, config, kind, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run.RunPeriod());
  state.SetLabel(AgentKindName(kind));
}
BENCHMARK(BM_RunPeriod)
    ->Arg(static_cast<int>(AgentKind::kMsbcb))
    ->Arg(static_cast<int>(AgentKind::kContextualBandit))
    ->Arg(static_cast<int>(AgentKind::kBidGridQ))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace msbcb

BENCHMARK_MAIN();
