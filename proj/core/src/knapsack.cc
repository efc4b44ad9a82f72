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
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "msbcb/csv.h"
#include "msbcb/errors.h"

namespace msbcb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxCost(const std::vector<KnapsackItem>& items) {
  double m = 0.0;
  for (const auto& item : items) m = std::max(m, item.cost);
  return m;
}

}  // namespace

void KnapsackInstance::Validate() const {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw ContractError("knapsack: budget must be finite and > 0");
  }
  for (const auto& item : items) {
    if (!std::isfinite(item.value) || !std::isfinite(item.cost) ||
        item.value < 0.0 || item.cost < 0.0) {
      throw ContractError("knapsack: item values and costs must be finite and >= 0");
    }
  }
}

double Cpr(double value, double cost) {
  if (cost > 0.0) return value / cost;
  return value > 0.0 ? kInf : 0.0;
}

std::vector<int> CprOrder(const std::vector<KnapsackItem>& items) {
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> cpr(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    cpr[i] = Cpr(items[i].value, items[i].cost);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cpr[static_cast<std::size_t>(a)] > cpr[static_cast<std::size_t>(b)];
  });
  return order;
}

KnapsackSolution GreedySolve(const KnapsackInstance& instance) {
  instance.Validate();
  KnapsackSolution sol;
  sol.cpr_thr = kInf;
  const double max_cost = MaxCost(instance.items);
  sol.lambda_cert = max_cost <= instance.budget ? 1.0 - max_cost / instance.budget : 0.0;

  for (int idx : CprOrder(instance.items)) {
    const KnapsackItem& item = instance.items[static_cast<std::size_t>(idx)];
    if (item.value <= 0.0) break;  // CPR order puts every zero-value item last
    if (sol.total_cost + item.cost > instance.budget) break;
    sol.selected.push_back(idx);
    sol.total_value += item.value;
    sol.total_cost += item.cost;
    sol.cpr_thr = Cpr(item.value, item.cost);
  }
  return sol;
}

namespace {

ExactSolution TakeAll(const KnapsackInstance& instance) {
  ExactSolution sol;
  sol.enumerated = true;
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    if (instance.items[i].value <= 0.0) continue;
    sol.selected.push_back(static_cast<int>(i));
    sol.value += instance.items[i].value;
    sol.total_cost += instance.items[i].cost;
  }
  return sol;
}

ExactSolution Enumerate(const KnapsackInstance& instance) {
  const auto& items = instance.items;
  const int n = static_cast<int>(items.size());
  // Gray-code walk: one item toggles per subset. Sums are recomputed for the
  // winner so the accumulated rounding never leaks into the result.
  const double slack = 1e-12 * std::max(1.0, instance.budget);
  double value = 0.0;
  double cost = 0.0;
  double best_value = 0.0;
  std::uint32_t best_mask = 0;
  std::uint32_t gray = 0;
  const std::uint32_t total = n == 0 ? 1u : (1u << n);
  for (std::uint32_t i = 1; i < total; ++i) {
    const int bit = __builtin_ctz(i);
    const std::uint32_t flag = 1u << bit;
    gray ^= flag;
    const auto& item = items[static_cast<std::size_t>(bit)];
    if (gray & flag) {
      value += item.value;
      cost += item.cost;
    } else {
      value -= item.value;
      cost -= item.cost;
    }
    if (cost <= instance.budget + slack && value > best_value) {
      best_value = value;
      best_mask = gray;
    }
  }

  ExactSolution sol;
  sol.enumerated = true;
  for (int k = 0; k < n; ++k) {
    if (best_mask & (1u << k)) {
      sol.selected.push_back(k);
      sol.value += items[static_cast<std::size_t>(k)].value;
      sol.total_cost += items[static_cast<std::size_t>(k)].cost;
    }
  }
  return sol;
}

ExactSolution GridDp(const KnapsackInstance& instance, double resolution) {
  const auto& items = instance.items;
  const std::size_t n = items.size();
  const double cap_d = std::floor(instance.budget / resolution);
  if (cap_d > 5e7 || cap_d * static_cast<double>(n) > 4e9) {
    throw ContractError("exact_solve: cost resolution too fine for the DP grid");
  }
  const auto cap = static_cast<std::size_t>(cap_d);

  std::vector<std::size_t> units(n);
  double rounding = 0.0;
  double max_cpr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::floor(items[i].cost / resolution);
    units[i] = u > cap_d ? cap + 1 : static_cast<std::size_t>(u);
    if (units[i] <= cap && items[i].value > 0.0) {
      rounding += items[i].cost - u * resolution;
      max_cpr = std::max(max_cpr, Cpr(items[i].value, items[i].cost));
    }
  }

  std::vector<double> best(cap + 1, 0.0);
  std::vector<std::vector<bool>> take(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t w = units[i];
    const double v = items[i].value;
    if (w > cap || v <= 0.0) continue;
    take[i].assign(cap + 1, false);
    for (std::size_t c = cap + 1; c-- > w;) {
      const double candidate = best[c - w] + v;
      if (candidate > best[c]) {
        best[c] = candidate;
        take[i][c] = true;
      }
    }
  }

  ExactSolution sol;
  sol.value = best[cap];
  std::size_t c = cap;
  for (std::size_t i = n; i-- > 0;) {
    if (!take[i].empty() && take[i][c]) {
      sol.selected.push_back(static_cast<int>(i));
      sol.total_cost += items[i].cost;
      c -= units[i];
    }
  }
  std::reverse(sol.selected.begin(), sol.selected.end());
  sol.error_bound = rounding > 0.0 ? rounding * max_cpr : 0.0;
  return sol;
}

}  // namespace

ExactSolution ExactSolve(const KnapsackInstance& instance,
                         double cost_resolution) {
  instance.Validate();
  if (!(cost_resolution > 0.0)) {
    throw ContractError("exact_solve: cost_resolution must be > 0");
  }
  double total = 0.0;
  for (const auto& item : instance.items) total += item.cost;
  if (total <= instance.budget) return TakeAll(instance);
  if (instance.items.size() <= static_cast<std::size_t>(kMaxEnumerationItems)) {
    return Enumerate(instance);
  }
  return GridDp(instance, cost_resolution);
}

double ApproximationLambda(const KnapsackInstance& instance) {
  instance.Validate();
  const double max_cost = MaxCost(instance.items);
  if (max_cost > instance.budget) {
    throw CertificateError("approximation_lambda: an item costs more than the budget");
  }
  return 1.0 - max_cost / instance.budget;
}

bool SelectOnline(double cpr, double cpr_thr) { return cpr >= cpr_thr; }

KnapsackInstance ReadKnapsackCsv(const std::string& path) {
  KnapsackInstance instance;
  bool have_budget = false;
  int line_no = 0;
  for (const std::string& raw : ReadLines(path)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string_view::npos &&
          Trim(line.substr(1, eq - 1)) == "budget") {
        instance.budget = ParseDouble(line.substr(eq + 1), "budget");
        have_budget = true;
      }
      continue;
    }
    const auto fields = SplitCsvLine(line);
    if (fields.size() == 2 && fields[0] == "value" && fields[1] == "cost") continue;
    if (fields.size() != 2) {
      throw ConfigError(path + ":" + std::to_string(line_no),
                        "expected 'value,cost'");
    }
    const std::string where = path + ":" + std::to_string(line_no);
    instance.items.push_back({ParseDouble(fields[0], where), ParseDouble(fields[1], where)});
  }
  if (!have_budget) throw ConfigError("budget", "missing '# budget = <B>' header in " + path);
  instance.Validate();
  return instance;
}

void WriteKnapsackCsv(const std::string& path, const KnapsackInstance& instance) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# budget = " << FormatDouble(instance.budget) << "\n";
  out << "value,cost\n";
  for (const auto& item : instance.items) {
    out << FormatDouble(item.value) << "," << FormatDouble(item.cost) << "\n";
  }
}

}  // namespace msbcb
