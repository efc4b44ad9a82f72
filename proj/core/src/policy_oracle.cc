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

#include "msbcb/policy_oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "msbcb/csv.h"
#include "msbcb/errors.h"
#include "msbcb/knapsack.h"

namespace msbcb {

std::string PolicySeq::ToString() const {
  std::string s(static_cast<std::size_t>(length), '0');
  for (int t = 0; t < length; ++t) {
    if (display(t)) s[static_cast<std::size_t>(t)] = '1';
  }
  return s;
}

PolicySeq PolicySeq::FromString(const std::string& s) {
  if (s.size() > 32) throw ContractError("policy longer than 32 steps");
  PolicySeq p;
  p.length = static_cast<int>(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] == '1') {
      p.bits |= 1u << t;
    } else if (s[t] != '0') {
      throw ConfigError("policy_bits", "expected only '0'/'1' in '" + s + "'");
    }
  }
  return p;
}

bool PolicyLess(const PolicySeq& a, const PolicySeq& b) {
  const int n = std::min(a.length, b.length);
  for (int t = 0; t < n; ++t) {
    if (a.display(t) != b.display(t)) return !a.display(t);
  }
  return a.length < b.length;
}

PolicyEval MakeEval(PolicySeq policy, double v_g, double v_c) {
  return PolicyEval{policy, v_g, v_c, Cpr(v_g, v_c)};
}

PolicyEval EvalPolicyWithPrices(const UserState& user, const Ad& ad,
                                const PolicySeq& policy,
                                const EnvConfig& config,
                                std::span<const double> second_prices) {
  const int horizon = std::min({user.horizon, policy.length, config.T_max});
  if (second_prices.size() < static_cast<std::size_t>(std::max(horizon, 0))) {
    throw ContractError("eval_policy: fewer second prices than steps");
  }
  EnvConfig frozen = config;
  frozen.deterministic_mode = true;  // beta fixed at its mean
  Rng unused(0);

  double survival = 1.0;
  double v_g = 0.0;
  double v_c = 0.0;
  TopicVector interest = user.interest;
  for (int t = 0; t < horizon; ++t) {
    if (!policy.display(t)) continue;
    const double ctr = Interest(interest, ad.topic);
    const double cvr = Satisfaction(interest, ad.topic, ad.quality, config.alpha_sat);
    const double price = second_prices[static_cast<std::size_t>(t)];
    double expected_cost = price;
    if (ad.pricing == PricingModel::kCpc) expected_cost = price * ctr;
    if (ad.pricing == PricingModel::kCps) expected_cost = price * ctr * cvr;
    v_g += survival * ad.item_price * ctr * cvr;
    v_c += survival * expected_cost;
    survival *= 1.0 - ctr * cvr;
    interest = UpdateInterest(interest, ad.topic, cvr, frozen, unused);
  }
  return MakeEval(policy, v_g, v_c);
}

namespace {

std::vector<double> FrozenPrices(const UserState& user, const EnvConfig& config) {
  std::vector<double> prices(static_cast<std::size_t>(config.T_max));
  for (int t = 0; t < config.T_max; ++t) {
    prices[static_cast<std::size_t>(t)] = FrozenSecondPrice(config, user.user_id, t);
  }
  return prices;
}

}  // namespace

PolicyEval EvalPolicy(const UserState& user, const Ad& ad,
                      const PolicySeq& policy, const EnvConfig& config) {
  if (!config.deterministic_mode) {
    throw ModeError("eval_policy requires deterministic_mode = true");
  }
  return EvalPolicyWithPrices(user, ad, policy, config, FrozenPrices(user, config));
}

UserPolicyMenu BuildMenu(const UserState& user, const Ad& ad,
                         const EnvConfig& config) {
  if (!config.deterministic_mode) {
    throw ModeError("build_menu requires deterministic_mode = true");
  }
  if (config.T_max > kMaxEnumerableSteps) {
    throw ContractError("policy enumeration supports T_max <= " +
                        std::to_string(kMaxEnumerableSteps));
  }
  const std::vector<double> prices = FrozenPrices(user, config);
  UserPolicyMenu menu;
  menu.user_id = user.user_id;
  const std::uint32_t count = 1u << config.T_max;
  menu.evals.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    menu.evals.push_back(EvalPolicyWithPrices(
        user, ad, PolicySeq{bits, config.T_max}, config, prices));
  }
  return menu;
}

std::vector<UserPolicyMenu> BuildMenus(const Population& population) {
  EnvConfig config = population.config;
  config.deterministic_mode = true;
  std::vector<UserPolicyMenu> menus;
  menus.reserve(population.users.size());
  for (const UserState& user : population.users) {
    menus.push_back(BuildMenu(user, population.ad(), config));
  }
  return menus;
}

namespace {

// Shared selector: larger score wins; ties -> smaller v_c, then PolicyLess.
template <typename Score>
const PolicyEval& ArgmaxWithTies(const UserPolicyMenu& menu, Score score) {
  if (menu.evals.empty()) throw ContractError("policy menu is empty");
  const PolicyEval* best = &menu.evals.front();
  double best_score = score(*best);
  for (const PolicyEval& e : menu.evals) {
    const double s = score(e);
    if (s > best_score ||
        (s == best_score &&
         (e.v_c < best->v_c ||
          (e.v_c == best->v_c && PolicyLess(e.policy, best->policy))))) {
      best = &e;
      best_score = s;
    }
  }
  return *best;
}

void RequirePositiveThreshold(double cpr_thr) {
  if (!(cpr_thr > 0.0)) throw ContractError("cpr_thr must be > 0");
}

}  // namespace

const PolicyEval& BestPolicyForThreshold(const UserPolicyMenu& menu,
                                         double cpr_thr) {
  RequirePositiveThreshold(cpr_thr);
  return ArgmaxWithTies(menu, [cpr_thr](const PolicyEval& e) {
    return e.v_g - cpr_thr * e.v_c;
  });
}

double VerticalDistance(const PolicyEval& eval, double cpr_thr) {
  return (eval.v_g - eval.v_c * cpr_thr) / std::sqrt(1.0 + cpr_thr * cpr_thr);
}

bool DistanceArgmaxAgrees(const UserPolicyMenu& menu, double cpr_thr) {
  RequirePositiveThreshold(cpr_thr);
  const PolicyEval& by_distance = ArgmaxWithTies(
      menu, [cpr_thr](const PolicyEval& e) { return VerticalDistance(e, cpr_thr); });
  return &by_distance == &BestPolicyForThreshold(menu, cpr_thr);
}

const PolicyEval& MaxCprPolicy(const UserPolicyMenu& menu) {
  if (menu.evals.empty()) throw ContractError("policy menu is empty");
  const PolicyEval* best = nullptr;
  for (const PolicyEval& e : menu.evals) {
    if (!(e.v_c > 0.0)) continue;
    if (best == nullptr || e.cpr > best->cpr ||
        (e.cpr == best->cpr && e.v_g > best->v_g)) {
      best = &e;
    }
  }
  if (best != nullptr) return *best;
  for (const PolicyEval& e : menu.evals) {
    if (e.policy.bits == 0) return e;
  }
  return menu.evals.front();
}

std::vector<PolicyEval> BudgetFrontier(const UserPolicyMenu& menu,
                                       std::span<const double> budget_grid) {
  if (menu.evals.empty()) throw ContractError("policy menu is empty");
  if (!std::is_sorted(budget_grid.begin(), budget_grid.end())) {
    throw ContractError("budget_frontier: budget grid must be ascending");
  }
  std::vector<PolicyEval> frontier;
  frontier.reserve(budget_grid.size());
  for (double cap : budget_grid) {
    const PolicyEval* best = nullptr;
    for (const PolicyEval& e : menu.evals) {
      if (e.v_c > cap) continue;
      if (best == nullptr || e.v_g > best->v_g ||
          (e.v_g == best->v_g &&
           (e.v_c < best->v_c ||
            (e.v_c == best->v_c && PolicyLess(e.policy, best->policy))))) {
        best = &e;
      }
    }
    if (best == nullptr) {
      throw ContractError("budget_frontier: no policy fits budget " + FormatDouble(cap));
    }
    frontier.push_back(*best);
  }
  return frontier;
}

namespace {

struct GridOption {
  std::size_t units;
  double value;
  int index;
};

// Pareto-pruned options per user on the cost grid; "skip" is implicit.
std::vector<std::vector<GridOption>> GridOptions(const std::vector<UserPolicyMenu>& menus,
                                                 double resolution, double cap,
                                                 bool round_up) {
  std::vector<std::vector<GridOption>> options(menus.size());
  for (std::size_t i = 0; i < menus.size(); ++i) {
    std::vector<GridOption> raw;
    for (std::size_t j = 0; j < menus[i].evals.size(); ++j) {
      const PolicyEval& e = menus[i].evals[j];
      if (!(e.v_g > 0.0)) continue;
      const double x = e.v_c / resolution;
      const double u = round_up ? std::ceil(x - 1e-9) : std::floor(x + 1e-9);
      if (u > cap) continue;
      raw.push_back({static_cast<std::size_t>(std::max(u, 0.0)), e.v_g, static_cast<int>(j)});
    }
    std::sort(raw.begin(), raw.end(), [](const GridOption& a, const GridOption& b) {
      if (a.units != b.units) return a.units < b.units;
      if (a.value != b.value) return a.value > b.value;
      return a.index < b.index;
    });
    double best_value = 0.0;
    for (const GridOption& o : raw) {
      if (o.value > best_value) {
        options[i].push_back(o);
        best_value = o.value;
      }
    }
    if (options[i].size() > 254) throw ContractError("offline_optimal: menu too large");
  }
  return options;
}

struct GridDpResult {
  double value = 0.0;
  std::vector<int> choices;  // empty when not tracked
};

GridDpResult MultiChoiceDp(const std::vector<std::vector<GridOption>>& options,
                           std::size_t cap, bool track) {
  std::vector<std::vector<std::uint8_t>> pick;
  if (track) pick.resize(options.size());
  std::vector<double> best(cap + 1, 0.0);
  std::vector<double> next(cap + 1, 0.0);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].empty()) continue;
    next = best;
    if (track) pick[i].assign(cap + 1, 0);
    for (std::size_t k = 0; k < options[i].size(); ++k) {
      const GridOption& o = options[i][k];
      const auto tag = static_cast<std::uint8_t>(k + 1);
      for (std::size_t c = o.units; c <= cap; ++c) {
        const double candidate = best[c - o.units] + o.value;
        if (candidate > next[c]) {
          next[c] = candidate;
          if (track) pick[i][c] = tag;
        }
      }
    }
    best.swap(next);
  }
  GridDpResult result;
  result.value = best[cap];
  if (track) {
    result.choices.assign(options.size(), -1);
    std::size_t c = cap;
    for (std::size_t i = options.size(); i-- > 0;) {
      if (pick[i].empty() || pick[i][c] == 0) continue;
      const GridOption& o = options[i][pick[i][c] - 1u];
      result.choices[i] = o.index;
      c -= o.units;
    }
  }
  return result;
}

// min over lambda >= 0 of lambda * B + sum_i max(0, max_j v_g - lambda * v_c):
// the LP relaxation bound of the multi-choice knapsack. The dual function is
// convex in lambda, so golden-section search converges to its minimum.
double LagrangianBound(const std::vector<UserPolicyMenu>& menus, double budget) {
  double hi = 0.0;
  for (const UserPolicyMenu& menu : menus) {
    for (const PolicyEval& e : menu.evals) {
      if (e.v_g > 0.0 && e.v_c > 0.0) hi = std::max(hi, e.cpr);
      if (e.v_g > 0.0 && e.v_c <= 0.0) hi = std::numeric_limits<double>::infinity();
    }
  }
  if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  auto dual = [&](double lambda) {
    double total = lambda * budget;
    for (const UserPolicyMenu& menu : menus) {
      double best = 0.0;
      for (const PolicyEval& e : menu.evals) best = std::max(best, e.v_g - lambda * e.v_c);
      total += best;
    }
    return total;
  };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0;
  double b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = dual(x1);
  double f2 = dual(x2);
  double best = std::min({dual(a), dual(b), f1, f2});
  for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = dual(x1);
      best = std::min(best, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = dual(x2);
      best = std::min(best, f2);
    }
  }
  return best;
}

}  // namespace

OfflineSolution OfflineOptimal(const std::vector<UserPolicyMenu>& menus,
                               double budget, double cost_resolution) {
  if (!(budget > 0.0)) throw ContractError("offline_optimal: budget must be > 0");
  if (!(cost_resolution > 0.0)) {
    throw ContractError("offline_optimal: cost_resolution must be > 0");
  }
  const double cap_d = std::floor(budget / cost_resolution + 1e-9);
  if (cap_d > 5e7) throw ContractError("offline_optimal: cost resolution too fine");
  const auto cap = static_cast<std::size_t>(cap_d);

  // Rounding costs down relaxes the budget (upper bound); rounding them up
  // tightens it (feasible lower bound).
  const GridDpResult upper =
      MultiChoiceDp(GridOptions(menus, cost_resolution, cap_d, false), cap, false);
  const bool track = static_cast<double>(menus.size()) * static_cast<double>(cap + 1) <=
                     static_cast<double>(64u << 20);
  const GridDpResult lower =
      MultiChoiceDp(GridOptions(menus, cost_resolution, cap_d, true), cap, track);

  OfflineSolution sol;
  sol.total_value = std::min(upper.value, LagrangianBound(menus, budget));
  sol.error_bound = std::max(0.0, sol.total_value - lower.value);
  if (track) {
    sol.choices = lower.choices;
    for (std::size_t i = 0; i < menus.size(); ++i) {
      if (sol.choices[i] >= 0) {
        sol.total_cost += menus[i].evals[static_cast<std::size_t>(sol.choices[i])].v_c;
        continue;
      }
      // Users left unselected take their all-zeros policy when it exists.
      for (std::size_t j = 0; j < menus[i].evals.size(); ++j) {
        if (menus[i].evals[j].v_g == 0.0 && menus[i].evals[j].v_c == 0.0) {
          sol.choices[i] = static_cast<int>(j);
          break;
        }
      }
    }
  }
  return sol;
}

void WriteMenusCsv(const std::string& path,
                   const std::vector<UserPolicyMenu>& menus) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "user_id,policy_bits,v_g,v_c\n";
  for (const UserPolicyMenu& menu : menus) {
    for (const PolicyEval& e : menu.evals) {
      out << menu.user_id << "," << e.policy.ToString() << ","
          << FormatDouble(e.v_g) << "," << FormatDouble(e.v_c) << "\n";
    }
  }
}

std::vector<UserPolicyMenu> ReadMenusCsv(const std::string& path) {
  const std::vector<std::string> lines = ReadLines(path);
  if (lines.empty() || Trim(lines.front()) != "user_id,policy_bits,v_g,v_c") {
    throw ConfigError(path, "expected header 'user_id,policy_bits,v_g,v_c'");
  }
  std::vector<UserPolicyMenu> menus;
  std::map<int, std::size_t> slot;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    const auto f = SplitCsvLine(lines[n]);
    const std::string where = path + ":" + std::to_string(n + 1);
    if (f.size() != 4) throw ConfigError(where, "expected 4 fields");
    const int user = static_cast<int>(ParseInt(f[0], where));
    auto [it, fresh] = slot.emplace(user, menus.size());
    if (fresh) menus.push_back(UserPolicyMenu{user, {}});
    menus[it->second].evals.push_back(MakeEval(PolicySeq::FromString(f[1]),
                                               ParseDouble(f[2], where),
                                               ParseDouble(f[3], where)));
  }
  return menus;
}

}  // namespace msbcb
