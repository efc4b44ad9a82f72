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

#include "msbcb/config.h"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "msbcb/csv.h"
#include "msbcb/errors.h"

namespace msbcb {
namespace {

using Setter = std::function<void(const std::string& value, const std::string& key)>;

int AsInt(const std::string& v, const std::string& key) {
  const std::int64_t x = ParseInt(v, key);
  if (x < INT32_MIN || x > INT32_MAX) throw ConfigError(key, "out of range");
  return static_cast<int>(x);
}

std::uint64_t AsSeed(const std::string& v, const std::string& key) {
  const std::int64_t x = ParseInt(v, key);
  if (x < 0) throw ConfigError(key, "seed must be non-negative");
  return static_cast<std::uint64_t>(x);
}

bool AsBool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> AsList(const std::string& v) {
  std::vector<std::string> out;
  for (const std::string& item : SplitCsvLine(v)) {
    const std::string t(Trim(item));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::map<std::string, Setter> EnvSetters(EnvConfig& e) {
  std::map<std::string, Setter> s;
  s["n_users"] = [&e](auto& v, auto& k) { e.n_users = AsInt(v, k); };
  s["n_ads"] = [&e](auto& v, auto& k) { e.n_ads = AsInt(v, k); };
  s["n_topics"] = [&e](auto& v, auto& k) { e.n_topics = AsInt(v, k); };
  s["T_max"] = [&e](auto& v, auto& k) { e.T_max = AsInt(v, k); };
  s["interest_max"] = [&e](auto& v, auto& k) { e.interest_max = ParseDouble(v, k); };
  s["alpha_sat"] = [&e](auto& v, auto& k) { e.alpha_sat = ParseDouble(v, k); };
  s["beta_mean"] = [&e](auto& v, auto& k) { e.beta_mean = ParseDouble(v, k); };
  s["beta_halfwidth"] = [&e](auto& v, auto& k) { e.beta_halfwidth = ParseDouble(v, k); };
  s["gamma_interest"] = [&e](auto& v, auto& k) { e.gamma_interest = ParseDouble(v, k); };
  s["bid_max"] = [&e](auto& v, auto& k) { e.bid_max = ParseDouble(v, k); };
  s["competitor_scale"] = [&e](auto& v, auto& k) { e.competitor_scale = ParseDouble(v, k); };
  s["competitor_sigma"] = [&e](auto& v, auto& k) { e.competitor_sigma = ParseDouble(v, k); };
  s["request_rate"] = [&e](auto& v, auto& k) { e.request_rate = ParseDouble(v, k); };
  s["n_channels"] = [&e](auto& v, auto& k) { e.n_channels = AsInt(v, k); };
  s["seed"] = [&e](auto& v, auto& k) { e.seed = AsSeed(v, k); };
  s["deterministic_mode"] = [&e](auto& v, auto& k) { e.deterministic_mode = AsBool(v, k); };
  return s;
}

std::map<std::string, Setter> ExperimentSetters(ExperimentConfig& c) {
  std::map<std::string, Setter> s;
  for (auto& [key, setter] : EnvSetters(c.env)) s["env." + key] = setter;

  AgentConfig& a = c.agent;
  s["agent.epsilon_start"] = [&a](auto& v, auto& k) { a.epsilon_start = ParseDouble(v, k); };
  s["agent.epsilon_end"] = [&a](auto& v, auto& k) { a.epsilon_end = ParseDouble(v, k); };
  s["agent.epsilon_decay"] = [&a](auto& v, auto& k) { a.epsilon_decay = ParseDouble(v, k); };
  s["agent.n_buckets"] = [&a](auto& v, auto& k) { a.n_buckets = AsInt(v, k); };
  s["agent.max_displays"] = [&a](auto& v, auto& k) { a.max_displays = AsInt(v, k); };
  s["agent.manual_bid_price"] = [&a](auto& v, auto& k) { a.manual_bid_price = ParseDouble(v, k); };
  s["agent.learning_rate"] = [&a](auto& v, auto& k) { a.learning_rate = ParseDouble(v, k); };
  s["agent.gamma"] = [&a](auto& v, auto& k) { a.gamma = ParseDouble(v, k); };
  s["agent.n_bid_levels"] = [&a](auto& v, auto& k) { a.n_bid_levels = AsInt(v, k); };
  s["agent.min_visits"] = [&a](auto& v, auto& k) { a.min_visits = AsInt(v, k); };

  PidConfig& p = c.pid;
  s["pid.initial_thr"] = [&p](auto& v, auto& k) { p.initial_thr = ParseDouble(v, k); };
  s["pid.alpha1"] = [&p](auto& v, auto& k) { p.alpha1 = ParseDouble(v, k); };
  s["pid.alpha2"] = [&p](auto& v, auto& k) { p.alpha2 = ParseDouble(v, k); };
  s["pid.window"] = [&p](auto& v, auto& k) { p.window = AsInt(v, k); };
  s["pid.floor"] = [&p](auto& v, auto& k) { p.floor = ParseDouble(v, k); };
  s["pid.ceiling"] = [&p](auto& v, auto& k) { p.ceiling = ParseDouble(v, k); };

  s["budget"] = [&c](auto& v, auto& k) { c.budget = ParseDouble(v, k); };
  s["n_periods"] = [&c](auto& v, auto& k) { c.n_periods = AsInt(v, k); };
  s["episodes_per_period"] = [&c](auto& v, auto& k) { c.episodes_per_period = AsInt(v, k); };
  s["algorithms"] = [&c](auto& v, auto&) { c.algorithms = AsList(v); };
  s["metrics_path"] = [&c](auto& v, auto&) { c.metrics_path = v; };
  s["master_seed"] = [&c](auto& v, auto& k) { c.master_seed = AsSeed(v, k); };
  s["n_seeds"] = [&c](auto& v, auto& k) { c.n_seeds = AsInt(v, k); };
  s["oracle_resolution"] = [&c](auto& v, auto& k) { c.oracle_resolution = ParseDouble(v, k); };
  s["revenue_levels"] = [&c](auto& v, auto& k) {
    c.revenue_levels.clear();
    for (const std::string& item : AsList(v)) c.revenue_levels.push_back(ParseDouble(item, k));
  };
  return s;
}

void Apply(std::map<std::string, Setter>& setters, const std::string& key,
           const std::string& value) {
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError(key, "unknown configuration key");
  it->second(value, key);
}

}  // namespace

KeyValues ReadKeyValueFile(const std::string& path) {
  KeyValues out;
  const std::vector<std::string> lines = ReadLines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string line = lines[n];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = std::string(Trim(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(n + 1), "expected 'key = value'");
    }
    out.emplace_back(std::string(Trim(line.substr(0, eq))),
                     std::string(Trim(line.substr(eq + 1))));
  }
  return out;
}

std::pair<std::string, std::string> ParseOverride(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(text, "override must look like key=value");
  }
  return {std::string(Trim(text.substr(0, eq))), std::string(Trim(text.substr(eq + 1)))};
}

void ApplyEnvKey(EnvConfig& env, const std::string& key, const std::string& value) {
  auto setters = EnvSetters(env);
  Apply(setters, key, value);
}

EnvConfig LoadEnvConfig(const std::string& path) {
  EnvConfig env;
  for (const auto& [key, value] : ReadKeyValueFile(path)) ApplyEnvKey(env, key, value);
  env.Validate();
  return env;
}

void ApplyExperimentKey(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  auto setters = ExperimentSetters(config);
  Apply(setters, key, value);
}

ExperimentConfig ParseConfig(const std::string& path,
                             const std::vector<std::string>& overrides) {
  ExperimentConfig config;
  auto setters = ExperimentSetters(config);
  if (!path.empty()) {
    for (const auto& [key, value] : ReadKeyValueFile(path)) Apply(setters, key, value);
  }
  for (const std::string& o : overrides) {
    const auto [key, value] = ParseOverride(o);
    Apply(setters, key, value);
  }
  config.Validate();
  return config;
}

std::vector<std::string> KnownExperimentKeys() {
  ExperimentConfig scratch;
  std::vector<std::string> keys;
  for (const auto& [key, setter] : ExperimentSetters(scratch)) keys.push_back(key);
  return keys;
}

}  // namespace msbcb
