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

#include "msbcb/property_suites.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include <fmt/core.h>

#include "msbcb/bidding_agent.h"
#include "msbcb/knapsack.h"
#include "msbcb/policy_oracle.h"
#include "msbcb/sim_env.h"

namespace msbcb {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

KnapsackInstance RandomInstance(KnapsackFamily family, Rng& rng) {
  std::uniform_int_distribution<int> size(50, 500);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = size(rng);
  KnapsackInstance inst;
  inst.items.resize(static_cast<std::size_t>(n));
  if (family == KnapsackFamily::kSmallItems) {
    inst.budget = 1000.0 * (1.0 + unit(rng));
    for (KnapsackItem& item : inst.items) {
      item.cost = 0.001 * inst.budget * (0.01 + 0.99 * unit(rng));
      item.value = item.cost * std::exp(2.0 * unit(rng) - 1.0);
    }
  } else {
    std::uniform_int_distribution<int> cost(1, 50);
    std::uniform_int_distribution<int> value(1, 100);
    double total = 0.0;
    for (KnapsackItem& item : inst.items) {
      item.cost = cost(rng);
      item.value = value(rng);
      total += item.cost;
    }
    inst.budget = std::floor(0.5 * total);
  }
  return inst;
}

// Menu points spread over a few orders of magnitude, plus the all-zeros policy.
UserPolicyMenu RandomMenu(Rng& rng) {
  std::uniform_int_distribution<int> size(2, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  UserPolicyMenu menu;
  const int n = size(rng);
  menu.evals.push_back(MakeEval(PolicySeq{0, 6}, 0.0, 0.0));
  for (int k = 1; k < n; ++k) {
    const double v_c = 10.0 * unit(rng);
    const double v_g = v_c * std::exp(4.0 * unit(rng) - 2.0);
    menu.evals.push_back(MakeEval(PolicySeq{static_cast<std::uint32_t>(k), 6}, v_g, v_c));
  }
  return menu;
}

UserPolicyMenu EnvironmentMenu(Rng& rng) {
  EnvConfig env;
  env.n_users = 1;
  env.T_max = 6;
  env.deterministic_mode = true;
  env.seed = rng();
  Population pop = BuildPopulation(env);
  UserState user = pop.users.front();
  user.horizon = env.T_max;
  return BuildMenu(user, pop.ad(), pop.config);
}

double LogUniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

const char* KnapsackFamilyName(KnapsackFamily family) {
  return family == KnapsackFamily::kSmallItems ? "small_items" : "tight";
}

GreedyBoundReport RunGreedyBoundSuite(int instances, std::uint64_t seed,
                                      KnapsackFamily family) {
  Stopwatch clock;
  GreedyBoundReport report;
  report.seed = seed;
  report.min_slack = std::numeric_limits<double>::infinity();
  Rng rng = DeriveRng(seed, {0x6b, static_cast<std::uint64_t>(family)});
  for (int k = 0; k < instances; ++k) {
    const KnapsackInstance inst = RandomInstance(family, rng);
    const double res = family == KnapsackFamily::kTight ? 1.0 : inst.budget * 1e-6;
    const ExactSolution exact = ExactSolve(inst, res);
    const KnapsackSolution greedy = GreedySolve(inst);
    const double lambda = ApproximationLambda(inst);
    ++report.instances;
    if (exact.selected.size() < inst.items.size()) ++report.budget_binding;
    if (!(exact.value > 0.0)) continue;
    const double slack = (greedy.total_value - lambda * exact.value) / exact.value;
    report.min_slack = std::min(report.min_slack, slack);
    report.min_ratio = std::min(report.min_ratio, greedy.total_value / exact.value);
    if (slack < -1e-12) ++report.violations;
  }
  report.seconds = clock.Seconds();
  return report;
}

RegretlessBidReport RunRegretlessBidSuite(int tuples, std::uint64_t seed) {
  Stopwatch clock;
  RegretlessBidReport report;
  report.seed = seed;
  Rng rng = DeriveRng(seed, {0x7b});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> model(0, 2);
  ValueEstimator est(1, 1, 1, 2, 0.1, 1.0);
  const DiscreteState s{};
  const double bid_max = 1e9;
  for (int k = 0; k < tuples; ++k) {
    const double thr = LogUniform(rng, 0.01, 100.0);
    const double qg0 = 20.0 * unit(rng);
    const double qg1 = 20.0 * unit(rng);
    const double qn0 = 10.0 * unit(rng);
    const double qn1 = 10.0 * unit(rng);
    const double pctr = 0.01 + 0.99 * unit(rng);
    const double pcvr = 0.01 + 0.99 * unit(rng);
    Ad ad;
    ad.pricing = static_cast<PricingModel>(model(rng));
    double charge_rate = 1.0;  // expected charged events per display
    if (ad.pricing == PricingModel::kCpc) charge_rate = pctr;
    if (ad.pricing == PricingModel::kCps) charge_rate = pctr * pcvr;
    const double margin = (qg1 / thr - qn1) - (qg0 / thr - qn0);
    const double price = std::max(0.0, margin / charge_rate + (4.0 * unit(rng) - 2.0));

    // Q_C(s, 1) carries the expected immediate charge.
    est.Set(s, 0, qg0, qn0, qn0);
    est.Set(s, 1, qg1, price * charge_rate + qn1, qn1);
    const double bid = OptimalBid(est, s, thr, ad, pctr, pcvr, bid_max);
    const bool won = bid > price;
    const bool display = GreedyAction(est, s, thr) == 1;
    ++report.tuples;
    if (won != display) ++report.violations;
  }
  report.seconds = clock.Seconds();
  return report;
}

DistanceArgmaxReport RunDistanceArgmaxSuite(int menus, std::uint64_t seed) {
  Stopwatch clock;
  DistanceArgmaxReport report;
  report.seed = seed;
  Rng rng = DeriveRng(seed, {0x7c});
  for (int k = 0; k < menus; ++k) {
    const UserPolicyMenu menu = k % 2 == 0 ? RandomMenu(rng) : EnvironmentMenu(rng);
    const double thr = LogUniform(rng, 0.01, 100.0);
    ++report.menus;
    if (!DistanceArgmaxAgrees(menu, thr)) ++report.mismatches;
    const double scale = std::sqrt(1.0 + thr * thr);
    for (const PolicyEval& e : menu.evals) {
      const double lhs = VerticalDistance(e, thr) * scale;
      const double rhs = e.v_g - thr * e.v_c;
      if (rhs == 0.0 && lhs == 0.0) continue;
      const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
      report.max_identity_rel_error = std::max(report.max_identity_rel_error, rel);
    }
  }
  report.seconds = clock.Seconds();
  return report;
}

FrontierReport RunFrontierSuite(int menus, std::uint64_t seed) {
  Stopwatch clock;
  FrontierReport report;
  report.seed = seed;
  Rng rng = DeriveRng(seed, {0x7d});
  std::vector<double> grid(64);
  for (int k = 0; k < menus; ++k) {
    const UserPolicyMenu menu = k % 2 == 0 ? RandomMenu(rng) : EnvironmentMenu(rng);
    double max_cost = 0.0;
    for (const PolicyEval& e : menu.evals) max_cost = std::max(max_cost, e.v_c);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      grid[g] = 1.1 * max_cost * static_cast<double>(g) / static_cast<double>(grid.size() - 1);
    }
    const std::vector<PolicyEval> frontier = BudgetFrontier(menu, grid);
    ++report.menus;
    for (std::size_t g = 1; g < frontier.size(); ++g) {
      if (frontier[g].v_g < frontier[g - 1].v_g) {
        ++report.violations;
        break;
      }
    }
  }
  report.seconds = clock.Seconds();
  return report;
}

std::string FormatReport(const GreedyBoundReport& r, KnapsackFamily family) {
  return fmt::format(
      "family={} seed={} instances={} budget_binding={} min_ratio={:.6f} "
      "min_slack={:.6g} seconds={:.2f}\nviolations={}",
      KnapsackFamilyName(family), r.seed, r.instances, r.budget_binding, r.min_ratio,
      r.min_slack, r.seconds, r.violations);
}

std::string FormatReport(const RegretlessBidReport& r) {
  return fmt::format("regretless_bid seed={} tuples={} violations={} seconds={:.2f}",
                     r.seed, r.tuples, r.violations, r.seconds);
}

std::string FormatReport(const DistanceArgmaxReport& r) {
  return fmt::format(
      "distance_argmax seed={} menus={} mismatches={} max_identity_rel_error={:.3g} "
      "seconds={:.2f}",
      r.seed, r.menus, r.mismatches, r.max_identity_rel_error, r.seconds);
}

std::string FormatReport(const FrontierReport& r) {
  return fmt::format("budget_frontier seed={} menus={} violations={} seconds={:.2f}",
                     r.seed, r.menus, r.violations, r.seconds);
}

}  // namespace msbcb
