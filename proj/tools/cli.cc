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

#include "cli.h"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "msbcb/config.h"
#include "msbcb/csv.h"
#include "msbcb/errors.h"
#include "msbcb/orchestrator.h"
#include "msbcb/policy_oracle.h"
#include "msbcb/property_suites.h"

namespace msbcb::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::string metrics_in;
  int instances = 1000;
  int tuples = 100000;
  int menus = 1000;
  std::uint64_t seed = 20240601;
};

fs::path PrepareOutDir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) throw IoError("cannot create out dir '" + dir + "'");
  return path;
}

ExperimentConfig LoadConfig(const Options& opt) {
  std::vector<std::string> overrides = opt.overrides;
  if (const char* seed = std::getenv("MSBCB_SEED"); seed != nullptr && *seed != '\0') {
    overrides.push_back(std::string("master_seed=") + seed);
  }
  return ParseConfig(opt.config_path, overrides);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
}

int RunCommand(const Options& opt, std::ostream& out) {
  ExperimentConfig config = LoadConfig(opt);
  const fs::path dir = PrepareOutDir(opt.out_dir);
  config.metrics_path = (dir / fs::path(config.metrics_path).filename()).string();
  for (int run = 0; run < config.n_seeds; ++run) {
    out << fmt::format("run {} seed={}\n", run, RunSeed(config.master_seed, run));
  }
  const std::vector<MetricsRecord> records = RunExperiment(config);
  const Summary summary = ComputeSummary(records, config.revenue_levels);
  WriteSummaryCsv((dir / "summary.csv").string(), summary);
  WriteCrossingsCsv((dir / "crossings.csv").string(), summary);
  for (const SummaryRow& r : summary.rows) {
    out << fmt::format("{}: revenue={:.2f}±{:.2f} cost={:.2f} approx_ratio={:.4f}\n",
                       r.algo, r.revenue_mean, r.revenue_std, r.cost_mean,
                       r.approx_ratio_mean);
  }
  out << "metrics=" << config.metrics_path << "\n";
  return 0;
}

int OracleCommand(const Options& opt, std::ostream& out) {
  ExperimentConfig config = LoadConfig(opt);
  const fs::path dir = PrepareOutDir(opt.out_dir);
  config.env.deterministic_mode = true;
  const Population population = BuildPopulation(config.env);
  WriteMenusCsv((dir / "menus.csv").string(), BuildMenus(population));
  const OracleValues o = ComputeOracles(population, config);

  std::ostringstream csv;
  csv << "algo,value,cost,cpr_thr,n_selected,error_bound\n";
  csv << kOfflineOptimalAlgo << "," << FormatDouble(o.offline_value) << ","
      << FormatDouble(o.offline_cost) << ",nan," << o.offline_served << ","
      << FormatDouble(o.offline_bound) << "\n";
  for (const auto& [name, plan] :
       {std::pair<const char*, const GreedyPlan*>{kMsbcbEnumAlgo, &o.msbcb_enum},
        {"greedy_maxcpr", &o.greedy_maxcpr}}) {
    csv << name << "," << FormatDouble(plan->value) << "," << FormatDouble(plan->cost)
        << "," << FormatDouble(plan->cpr_thr) << "," << plan->selected.size() << ",0\n";
  }
  WriteText(dir / "oracle.csv", csv.str());
  const double ratio = o.offline_value > 0.0 ? o.msbcb_enum.value / o.offline_value : 0.0;
  out << fmt::format(
      "offline_optimal={:.4f} (bound {:.4g}) msbcb_enum={:.4f} greedy_maxcpr={:.4f} "
      "enum_ratio={:.6f}\n",
      o.offline_value, o.offline_bound, o.msbcb_enum.value, o.greedy_maxcpr.value, ratio);
  return 0;
}

int KnapsackBenchCommand(const Options& opt, std::ostream& out, std::ostream& err) {
  const fs::path dir = PrepareOutDir(opt.out_dir);
  std::string report;
  int violations = 0;
  for (KnapsackFamily family : {KnapsackFamily::kSmallItems, KnapsackFamily::kTight}) {
    const GreedyBoundReport r = RunGreedyBoundSuite(opt.instances, opt.seed, family);
    report += FormatReport(r, family) + "\n";
    violations += r.violations;
  }
  report += fmt::format("violations={}\n", violations);
  WriteText(dir / "knapsack_bench.txt", report);
  out << report;
  if (violations != 0) {
    err << "knapsack-bench: " << violations << " approximation-bound violations\n";
    return 1;
  }
  return 0;
}

int PropertyCheckCommand(const Options& opt, std::ostream& out, std::ostream& err) {
  const fs::path dir = PrepareOutDir(opt.out_dir);
  const RegretlessBidReport bid = RunRegretlessBidSuite(opt.tuples, opt.seed);
  const DistanceArgmaxReport distance = RunDistanceArgmaxSuite(opt.menus, opt.seed);
  const FrontierReport frontier = RunFrontierSuite(opt.menus, opt.seed);
  std::string report = FormatReport(bid) + "\n" + FormatReport(distance) + "\n" +
                       FormatReport(frontier) + "\n";
  report += fmt::format("theorem3_violations={},theorem4_mismatches={}\n", bid.violations,
                        distance.mismatches);
  report += fmt::format("frontier_violations={}\n", frontier.violations);
  WriteText(dir / "theorem_check.txt", report);
  out << report;
  const bool identity_ok = distance.max_identity_rel_error <= 1e-12;
  if (bid.violations != 0 || distance.mismatches != 0 || frontier.violations != 0 ||
      !identity_ok) {
    err << "theorem-check: property suite failed (see report)\n";
    return 1;
  }
  return 0;
}

int SummarizeCommand(const Options& opt, std::ostream& out) {
  const fs::path dir = PrepareOutDir(opt.out_dir);
  std::vector<double> levels;
  if (!opt.config_path.empty() || !opt.overrides.empty()) {
    levels = LoadConfig(opt).revenue_levels;
  }
  const std::vector<MetricsRecord> records = ReadMetricsCsv(opt.metrics_in);
  if (records.empty()) throw ContractError("summarize: no records in " + opt.metrics_in);
  const Summary summary = ComputeSummary(records, levels);
  WriteSummaryCsv((dir / "summary.csv").string(), summary);
  WriteCrossingsCsv((dir / "crossings.csv").string(), summary);
  out << kSummaryHeader << "\n";
  for (const SummaryRow& r : summary.rows) {
    out << r.algo << "," << FormatDouble(r.revenue_mean) << ","
        << FormatDouble(r.revenue_std) << "," << FormatDouble(r.cost_mean) << ","
        << FormatDouble(r.approx_ratio_mean) << "," << FormatDouble(r.approx_ratio_std)
        << "\n";
  }
  return 0;
}

void AddConfigFlags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "key = value configuration file");
  cmd->add_option("--set", opt.overrides, "override, key=value (repeatable)");
  cmd->add_option("--out", opt.out_dir, "output directory");
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Options opt;
  CLI::App app{"Multi-step budget-constrained bidding experiments"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "train and evaluate the configured algorithms");
  AddConfigFlags(run, opt);
  CLI::App* oracle = app.add_subcommand("oracle", "policy menus and oracle solutions");
  AddConfigFlags(oracle, opt);
  CLI::App* bench = app.add_subcommand("knapsack-bench", "greedy vs exact bound suite");
  bench->add_option("--out", opt.out_dir, "output directory");
  bench->add_option("--instances", opt.instances, "instances per family")->check(CLI::PositiveNumber);
  bench->add_option("--seed", opt.seed, "suite seed");
  CLI::App* check = app.add_subcommand("theorem-check", "bid and policy property suites");
  check->add_option("--out", opt.out_dir, "output directory");
  check->add_option("--tuples", opt.tuples, "bid tuples")->check(CLI::PositiveNumber);
  check->add_option("--menus", opt.menus, "policy menus")->check(CLI::PositiveNumber);
  check->add_option("--seed", opt.seed, "suite seed");
  CLI::App* summarize = app.add_subcommand("summarize", "summary tables from a metrics CSV");
  summarize->add_option("metrics", opt.metrics_in, "metrics CSV")->required();
  AddConfigFlags(summarize, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "msbcb: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) return RunCommand(opt, out);
    if (*oracle) return OracleCommand(opt, out);
    if (*bench) return KnapsackBenchCommand(opt, out, err);
    if (*check) return PropertyCheckCommand(opt, out, err);
    if (*summarize) return SummarizeCommand(opt, out);
  } catch (const ConfigError& e) {
    err << "msbcb: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "msbcb: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace msbcb::cli
