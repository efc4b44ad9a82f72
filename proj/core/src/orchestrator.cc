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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "msbcb/csv.h"
#include "msbcb/errors.h"
#include "msbcb/knapsack.h"

namespace msbcb {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool IsLearningKind(AgentKind kind) {
  return kind == AgentKind::kMsbcb || kind == AgentKind::kBidGridQ;
}

bool IsOracleAlgo(const std::string& name) {
  return name == kMsbcbEnumAlgo || name == kOfflineOptimalAlgo ||
         name == AgentKindName(AgentKind::kGreedyMaxCpr);
}

}  // namespace

bool IsKnownAlgorithm(const std::string& name) {
  if (IsOracleAlgo(name)) return true;
  try {
    ParseAgentKind(name);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

void ExperimentConfig::Validate() const {
  env.Validate();
  agent.Validate();
  pid.Validate();
  if (!(budget > 0.0) || !std::isfinite(budget)) throw ConfigError("budget", "must be > 0");
  if (n_periods < 1) throw ConfigError("n_periods", "must be >= 1");
  if (episodes_per_period < 1) throw ConfigError("episodes_per_period", "must be >= 1");
  if (n_seeds < 1) throw ConfigError("n_seeds", "must be >= 1");
  if (!(oracle_resolution > 0.0 && oracle_resolution <= 1.0)) {
    throw ConfigError("oracle_resolution", "must be in (0, 1]");
  }
  if (algorithms.empty()) throw ConfigError("algorithms", "must name at least one algorithm");
  for (const std::string& a : algorithms) {
    if (!IsKnownAlgorithm(a)) throw ConfigError("algorithms", "unknown algorithm '" + a + "'");
  }
  if (metrics_path.empty()) throw ConfigError("metrics_path", "must not be empty");
}

int ExperimentConfig::DaysPerPeriod() const {
  if (env.n_users <= 0) return 1;
  return std::max(1, episodes_per_period / env.n_users);
}

// --- Oracle solvers --------------------------------------------------------------

GreedyPlan GreedyOverPolicies(const std::vector<UserPolicyMenu>& menus,
                              const std::vector<int>& choices, double budget) {
  if (choices.size() != menus.size()) {
    throw ContractError("greedy: one choice per menu required");
  }
  KnapsackInstance instance;
  instance.budget = budget;
  std::vector<int> owner;
  for (std::size_t i = 0; i < menus.size(); ++i) {
    if (choices[i] < 0) continue;
    const PolicyEval& e = menus[i].evals.at(static_cast<std::size_t>(choices[i]));
    instance.items.push_back({e.v_g, e.v_c});
    owner.push_back(static_cast<int>(i));
  }
  const KnapsackSolution sol = GreedySolve(instance);

  GreedyPlan plan;
  plan.cpr_thr = sol.cpr_thr;
  plan.value = sol.total_value;
  plan.cost = sol.total_cost;
  plan.choices.assign(menus.size(), -1);
  for (int item : sol.selected) {
    const int user = owner[static_cast<std::size_t>(item)];
    plan.selected.push_back(user);
    plan.choices[static_cast<std::size_t>(user)] = choices[static_cast<std::size_t>(user)];
  }
  return plan;
}

namespace {

int EvalIndex(const UserPolicyMenu& menu, const PolicyEval& e) {
  return static_cast<int>(&e - menu.evals.data());
}

// Positive slopes of the upper concave hull of (v_c, v_g) from the origin.
void CollectHullSlopes(const UserPolicyMenu& menu, std::vector<double>& slopes) {
  std::vector<std::pair<double, double>> pts;
  for (const PolicyEval& e : menu.evals) {
    if (e.v_g > 0.0 && e.v_c > 0.0) pts.emplace_back(e.v_c, e.v_g);
  }
  std::sort(pts.begin(), pts.end());
  double x = 0.0;
  double y = 0.0;
  while (true) {
    double best_slope = 0.0;
    std::size_t best = pts.size();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].first <= x || pts[k].second <= y) continue;
      const double slope = (pts[k].second - y) / (pts[k].first - x);
      if (slope > best_slope ||
          (slope == best_slope && best < pts.size() && pts[k].first > pts[best].first)) {
        best_slope = slope;
        best = k;
      }
    }
    if (best == pts.size()) break;
    slopes.push_back(best_slope);
    x = pts[best].first;
    y = pts[best].second;
  }
}

struct ThresholdProbe {
  GreedyPlan plan;
  double spend = 0.0;  // total v_c of all admitted users before truncation
};

ThresholdProbe Probe(const std::vector<UserPolicyMenu>& menus, double thr,
                     double budget) {
  std::vector<int> choices(menus.size(), -1);
  double spend = 0.0;
  for (std::size_t i = 0; i < menus.size(); ++i) {
    const PolicyEval& e = BestPolicyForThreshold(menus[i], thr);
    if (e.v_g > 0.0 && SelectOnline(e.cpr, thr)) {
      choices[i] = EvalIndex(menus[i], e);
      spend += e.v_c;
    }
  }
  ThresholdProbe probe{GreedyOverPolicies(menus, choices, budget), spend};
  probe.plan.cpr_thr = thr;
  return probe;
}

}  // namespace

GreedyPlan MsbcbEnumSolve(const std::vector<UserPolicyMenu>& menus, double budget,
                          const ThresholdSearch& search) {
  if (!(budget > 0.0)) throw ContractError("msbcb_enum: budget must be > 0");
  std::vector<double> slopes;
  for (const UserPolicyMenu& menu : menus) CollectHullSlopes(menu, slopes);
  if (slopes.empty()) {
    GreedyPlan empty;
    empty.cpr_thr = 1.0;
    empty.choices.assign(menus.size(), -1);
    return empty;
  }
  const auto [min_it, max_it] = std::minmax_element(slopes.begin(), slopes.end());
  const double lo = std::log(0.5 * *min_it);
  const double hi = std::log(2.0 * *max_it);
  const int points = std::max(search.grid_points, 2);

  std::vector<double> grid(static_cast<std::size_t>(points));
  std::vector<ThresholdProbe> probes;
  probes.reserve(grid.size());
  GreedyPlan best;
  best.cpr_thr = std::exp(hi);
  best.choices.assign(menus.size(), -1);
  auto consider = [&best](const ThresholdProbe& p) {
    if (p.plan.value > best.value) best = p.plan;
  };
  for (int k = 0; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        std::exp(lo + (hi - lo) * static_cast<double>(k) / (points - 1));
    probes.push_back(Probe(menus, grid[static_cast<std::size_t>(k)], budget));
    consider(probes.back());
  }

  // Spend is non-increasing in thr; refine where it crosses the budget.
  for (int k = 0; k + 1 < points; ++k) {
    if (probes[static_cast<std::size_t>(k)].spend > budget &&
        probes[static_cast<std::size_t>(k) + 1].spend <= budget) {
      double a = std::log(grid[static_cast<std::size_t>(k)]);
      double b = std::log(grid[static_cast<std::size_t>(k) + 1]);
      for (int step = 0; step < search.bisection_steps; ++step) {
        const double mid = 0.5 * (a + b);
        const ThresholdProbe p = Probe(menus, std::exp(mid), budget);
        consider(p);
        if (p.spend > budget) {
          a = mid;
        } else {
          b = mid;
        }
      }
    }
  }
  return best;
}

GreedyPlan GreedyMaxCprSolve(const std::vector<UserPolicyMenu>& menus,
                             double budget) {
  std::vector<int> choices(menus.size(), -1);
  for (std::size_t i = 0; i < menus.size(); ++i) {
    const PolicyEval& e = MaxCprPolicy(menus[i]);
    if (e.v_g > 0.0 && e.v_c > 0.0) choices[i] = EvalIndex(menus[i], e);
  }
  // Users admitted by any threshold form a CPR prefix, and stop-at-violation
  // greedy on a prefix never beats greedy on the full list, so the threshold
  // search reduces to one greedy pass.
  return GreedyOverPolicies(menus, choices, budget);
}

std::vector<UserPolicyMenu> ReplicateMenus(const std::vector<UserPolicyMenu>& menus,
                                           int copies) {
  std::vector<UserPolicyMenu> out;
  out.reserve(menus.size() * static_cast<std::size_t>(std::max(copies, 0)));
  for (int c = 0; c < copies; ++c) out.insert(out.end(), menus.begin(), menus.end());
  return out;
}

// --- Online learning loop --------------------------------------------------------

LearningRun::LearningRun(const Population& population,
                         const ExperimentConfig& config, AgentKind kind,
                         std::uint64_t seed, std::optional<double> offline_value)
    : population_(&population),
      config_(config),
      kind_(kind),
      seed_(seed),
      offline_value_(offline_value),
      estimator_(config.agent.n_buckets, population.config.T_max,
                 config.agent.max_displays,
                 kind == AgentKind::kBidGridQ ? config.agent.n_bid_levels : 2,
                 config.agent.learning_rate, config.agent.gamma),
      controller_(config.pid) {
  config_.agent.kind = kind;
  if (population.config.deterministic_mode) {
    throw ModeError("online runs need the stochastic environment");
  }
  if (kind == AgentKind::kGreedyMaxCpr) {
    throw ConfigError("algorithms", "greedy_maxcpr is an oracle and cannot run online");
  }
}

MetricsRecord LearningRun::RunPeriod() {
  const Population& pop = *population_;
  const EnvConfig& env = pop.config;
  const Ad& ad = pop.ad();
  const int days = config_.DaysPerPeriod();
  const double thr = controller_.cpr_thr();
  const double epsilon = IsLearningKind(kind_) ? config_.agent.Epsilon(period_) : 0.0;
  const ActContext ctx{&estimator_, thr, epsilon};
  const double day_budget = config_.budget / days;

  std::vector<Transition> batch;
  double revenue = 0.0;
  double cost = 0.0;
  int n_selected = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int day = 0; day < days; ++day) {
    std::vector<UserState> users = pop.users;
    std::vector<Rng> env_rngs;
    std::vector<Rng> agent_rngs;
    env_rngs.reserve(users.size());
    agent_rngs.reserve(users.size());
    const auto period_tag = static_cast<std::uint64_t>(period_);
    const auto day_tag = static_cast<std::uint64_t>(day);
    for (std::uint64_t i = 0; i < users.size(); ++i) {
      env_rngs.push_back(DeriveRng(seed_, {0xe0, period_tag, day_tag, i}));
      agent_rngs.push_back(DeriveRng(seed_, {0xa9, period_tag, day_tag, i}));
    }
    std::vector<bool> served(users.size(), false);
    double day_cost = 0.0;

    for (const Request& req : pop.requests) {
      const auto idx = static_cast<std::size_t>(req.user_id);
      UserState& st = users[idx];
      if (st.terminal()) continue;
      st.channel = req.channel;

      bool serve = true;
      if (kind_ == AgentKind::kManualBid) {
        serve = day_cost < day_budget;
      } else if (IsLearningKind(kind_)) {
        const DiscreteState s = Discretize(st, ad, config_.agent, env.T_max);
        serve = estimator_.state_visits(s) < config_.agent.min_visits ||
                SelectOnline(UserCprEstimate(estimator_, s).cpr, thr) ||
                unit(agent_rngs[idx]) < epsilon;
      }
      if (!serve) {
        st.step += 1;
        continue;
      }
      served[idx] = true;

      const Action action = Act(config_.agent, ctx, st, ad, env, agent_rngs[idx]);
      const StepOutcome out = EnvStep(st, ad, action.bid, env, env_rngs[idx]);
      revenue += out.value;
      cost += out.cost;
      day_cost += out.cost;
      ++samples_;
      if (IsLearningKind(kind_)) {
        Transition t;
        t.state = Discretize(st, ad, config_.agent, env.T_max);
        t.action = kind_ == AgentKind::kMsbcb ? (out.won ? 1 : 0) : action.level;
        t.value = out.value;
        t.cost = out.cost;
        t.next_state = Discretize(out.next_state, ad, config_.agent, env.T_max);
        t.terminal = out.terminal;
        batch.push_back(t);
      }
      st = out.next_state;
    }
    n_selected += static_cast<int>(std::count(served.begin(), served.end(), true));
  }

  // Later steps first, so successor values are fresh when they are bootstrapped.
  std::stable_sort(batch.begin(), batch.end(), [](const Transition& a, const Transition& b) {
    return a.state.step > b.state.step;
  });
  for (const Transition& t : batch) estimator_.TdUpdate(t);
  if (transition_log_ != nullptr) {
    transition_log_->insert(transition_log_->end(), batch.begin(), batch.end());
  }
  if (kind_ != AgentKind::kManualBid) controller_.Update(cost, config_.budget);

  MetricsRecord rec;
  rec.algo = AgentKindName(kind_);
  rec.period = period_ + 1;
  rec.seed = seed_;
  rec.revenue = revenue;
  rec.cost = cost;
  rec.cpr_thr = thr;
  rec.n_selected = n_selected;
  rec.n_samples = samples_;
  rec.approx_ratio =
      offline_value_ && *offline_value_ > 0.0 ? revenue / *offline_value_ : kNaN;
  ++period_;
  return rec;
}

std::uint64_t RunSeed(std::uint64_t master_seed, int run) {
  return MixHash(master_seed ^ MixHash(static_cast<std::uint64_t>(run) + 0x51ed));
}

OracleValues ComputeOracles(const Population& population,
                            const ExperimentConfig& config) {
  const std::vector<UserPolicyMenu> menus =
      ReplicateMenus(BuildMenus(population), config.DaysPerPeriod());
  const OfflineSolution offline =
      OfflineOptimal(menus, config.budget, config.budget * config.oracle_resolution);
  OracleValues v;
  v.offline_value = offline.total_value;
  v.offline_bound = offline.error_bound;
  if (offline.choices.empty()) {
    v.offline_cost = kNaN;
  } else {
    v.offline_cost = offline.total_cost;
    for (std::size_t i = 0; i < menus.size(); ++i) {
      const int c = offline.choices[i];
      if (c >= 0 && menus[i].evals[static_cast<std::size_t>(c)].v_g > 0.0) ++v.offline_served;
    }
  }
  v.msbcb_enum = MsbcbEnumSolve(menus, config.budget);
  v.greedy_maxcpr = GreedyMaxCprSolve(menus, config.budget);
  return v;
}

namespace {

MetricsRecord OracleRecord(const std::string& algo, int period, std::uint64_t seed,
                           double value, double cost, double thr, int n_selected,
                           double offline_value) {
  MetricsRecord rec;
  rec.algo = algo;
  rec.period = period;
  rec.seed = seed;
  rec.revenue = value;
  rec.cost = cost;
  rec.cpr_thr = thr;
  rec.n_selected = n_selected;
  rec.n_samples = 0;
  if (algo == kOfflineOptimalAlgo) {
    rec.approx_ratio = 1.0;
  } else {
    rec.approx_ratio = offline_value > 0.0 ? value / offline_value : kNaN;
  }
  return rec;
}

}  // namespace

std::vector<MetricsRecord> RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  {
    std::ofstream probe(config.metrics_path, std::ios::trunc);
    if (!probe) throw IoError("cannot write metrics file '" + config.metrics_path + "'");
  }

  const Population population = BuildPopulation(config.env);
  std::optional<OracleValues> oracles;
  if (config.env.T_max <= kMaxEnumerableSteps) {
    oracles = ComputeOracles(population, config);
  } else {
    for (const std::string& a : config.algorithms) {
      if (IsOracleAlgo(a)) {
        throw ConfigError("algorithms", a + " needs env.T_max <= " +
                                            std::to_string(kMaxEnumerableSteps));
      }
    }
  }
  const std::optional<double> offline_value =
      oracles ? std::optional<double>(oracles->offline_value) : std::nullopt;

  std::vector<MetricsRecord> records;
  for (const std::string& algo : config.algorithms) {
    for (int run = 0; run < config.n_seeds; ++run) {
      const std::uint64_t seed = RunSeed(config.master_seed, run);
      if (IsOracleAlgo(algo)) {
        const OracleValues& o = *oracles;
        for (int p = 1; p <= config.n_periods; ++p) {
          if (algo == kOfflineOptimalAlgo) {
            records.push_back(OracleRecord(algo, p, seed, o.offline_value, o.offline_cost,
                                           kNaN, o.offline_served, o.offline_value));
          } else {
            const GreedyPlan& plan =
                algo == kMsbcbEnumAlgo ? o.msbcb_enum : o.greedy_maxcpr;
            records.push_back(OracleRecord(algo, p, seed, plan.value, plan.cost,
                                           plan.cpr_thr,
                                           static_cast<int>(plan.selected.size()),
                                           o.offline_value));
          }
        }
        continue;
      }
      LearningRun run_state(population, config, ParseAgentKind(algo), seed,
                            offline_value);
      for (int p = 0; p < config.n_periods; ++p) {
        records.push_back(run_state.RunPeriod());
      }
    }
  }
  WriteMetricsCsv(config.metrics_path, records);
  return records;
}

void WriteMetricsCsv(const std::string& path, const std::vector<MetricsRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kMetricsHeader << "\n";
  for (const MetricsRecord& r : records) {
    out << r.algo << "," << r.period << "," << r.seed << "," << FormatDouble(r.revenue)
        << "," << FormatDouble(r.cost) << "," << FormatDouble(r.cpr_thr) << ","
        << r.n_selected << "," << r.n_samples << "," << FormatDouble(r.approx_ratio)
        << "\n";
  }
}

std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path) {
  const std::vector<std::string> lines = ReadLines(path);
  std::vector<MetricsRecord> records;
  if (lines.empty()) return records;
  if (Trim(lines.front()) != kMetricsHeader) {
    throw ConfigError(path, std::string("expected header '") + kMetricsHeader + "'");
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    const auto f = SplitCsvLine(lines[n]);
    const std::string where = path + ":" + std::to_string(n + 1);
    if (f.size() != 9) throw ConfigError(where, "expected 9 fields");
    MetricsRecord r;
    r.algo = f[0];
    r.period = static_cast<int>(ParseInt(f[1], where));
    r.seed = static_cast<std::uint64_t>(std::stoull(f[2]));
    r.revenue = ParseDouble(f[3], where);
    r.cost = ParseDouble(f[4], where);
    r.cpr_thr = ParseDouble(f[5], where);
    r.n_selected = static_cast<int>(ParseInt(f[6], where));
    r.n_samples = ParseInt(f[7], where);
    r.approx_ratio = ParseDouble(f[8], where);
    records.push_back(r);
  }
  return records;
}

// --- Summaries ---------------------------------------------------------------------

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd Stats(const std::vector<double>& xs) {
  MeanStd s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

std::optional<MetricsRecord> FirstCrossing(const std::vector<MetricsRecord>& run,
                                           double level) {
  std::optional<MetricsRecord> first;
  for (const MetricsRecord& r : run) {
    if (r.revenue >= level && (!first || r.period < first->period)) first = r;
  }
  return first;
}

Summary ComputeSummary(const std::vector<MetricsRecord>& records,
                       const std::vector<double>& revenue_levels) {
  if (records.empty()) throw ContractError("summarize: no records");

  std::vector<std::string> order;
  std::map<std::string, std::map<std::uint64_t, std::vector<const MetricsRecord*>>> runs;
  for (const MetricsRecord& r : records) {
    if (runs.find(r.algo) == runs.end()) order.push_back(r.algo);
    runs[r.algo][r.seed].push_back(&r);
  }

  Summary summary;
  double best_final = 0.0;
  double offline = kNaN;
  for (const std::string& algo : order) {
    std::vector<double> revenue, cost, ratio;
    for (auto& [seed, rows] : runs[algo]) {
      const MetricsRecord* last = *std::max_element(
          rows.begin(), rows.end(),
          [](const MetricsRecord* a, const MetricsRecord* b) { return a->period < b->period; });
      revenue.push_back(last->revenue);
      cost.push_back(last->cost);
      ratio.push_back(last->approx_ratio);
    }
    const MeanStd rv = Stats(revenue);
    const MeanStd ar = Stats(ratio);
    summary.rows.push_back({algo, rv.mean, rv.std, Stats(cost).mean, ar.mean, ar.std});
    best_final = std::max(best_final, rv.mean);
    if (algo == kOfflineOptimalAlgo) offline = rv.mean;
  }

  std::vector<double> levels = revenue_levels;
  if (levels.empty()) {
    const double base = std::isnan(offline) ? best_final : offline;
    levels = {0.5 * base, 0.75 * base, 0.9 * base};
  }

  for (const std::string& algo : order) {
    // Seed-averaged curve: mean revenue and mean cumulative samples per period.
    std::map<int, std::pair<double, double>> sums;
    std::map<int, int> counts;
    for (auto& [seed, rows] : runs[algo]) {
      for (const MetricsRecord* r : rows) {
        sums[r->period].first += r->revenue;
        sums[r->period].second += static_cast<double>(r->n_samples);
        counts[r->period] += 1;
      }
    }
    for (double level : levels) {
      CrossingRow row{algo, level, std::nullopt, std::nullopt};
      for (auto& [period, s] : sums) {
        const double n = counts[period];
        if (s.first / n >= level) {
          row.period = period;
          row.samples = s.second / n;
          break;
        }
      }
      summary.crossings.push_back(row);
    }
  }
  return summary;
}

void WriteSummaryCsv(const std::string& path, const Summary& summary) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kSummaryHeader << "\n";
  for (const SummaryRow& r : summary.rows) {
    out << r.algo << "," << FormatDouble(r.revenue_mean) << ","
        << FormatDouble(r.revenue_std) << "," << FormatDouble(r.cost_mean) << ","
        << FormatDouble(r.approx_ratio_mean) << "," << FormatDouble(r.approx_ratio_std)
        << "\n";
  }
}

void WriteCrossingsCsv(const std::string& path, const Summary& summary) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "algo,level,period,samples\n";
  for (const CrossingRow& r : summary.crossings) {
    out << r.algo << "," << FormatDouble(r.level) << ","
        << (r.period ? std::to_string(*r.period) : "n/a") << ","
        << (r.samples ? FormatDouble(*r.samples) : "n/a") << "\n";
  }
}

}  // namespace msbcb
