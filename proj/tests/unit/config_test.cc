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

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "msbcb/errors.h"
#include "test_util.h"

namespace msbcb {
namespace {

using ::msbcb::testing::ScratchDir;
using ::msbcb::testing::Spit;

std::string ErrorKey(const std::string& path, const std::vector<std::string>& overrides) {
  try {
    ParseConfig(path, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(ParseConfigTest, EmptyPathGivesDefaults) {
  const ExperimentConfig config = ParseConfig("");
  EXPECT_EQ(config.budget, ExperimentConfig().budget);
  EXPECT_EQ(config.env.T_max, 6);
}

TEST(ParseConfigTest, BudgetFromFile) {
  const auto path = ScratchDir() / "c.cfg";
  Spit(path, "# comment\nbudget = 12000\n\nenv.n_users = 50\n");
  const ExperimentConfig config = ParseConfig(path.string());
  EXPECT_EQ(config.budget, 12000.0);
  EXPECT_EQ(config.env.n_users, 50);
}

TEST(ParseConfigTest, OverrideBeatsFile) {
  const auto path = ScratchDir() / "c.cfg";
  Spit(path, "env.seed = 3\n");
  EXPECT_EQ(ParseConfig(path.string(), {"env.seed=7"}).env.seed, 7u);
  EXPECT_EQ(ParseConfig(path.string()).env.seed, 3u);
}

TEST(ParseConfigTest, InvalidValuesNameTheirKey) {
  const auto path = ScratchDir() / "c.cfg";
  Spit(path, "budget = -1\n");
  EXPECT_EQ(ErrorKey(path.string(), {}), "budget");
  EXPECT_EQ(ErrorKey("", {"budget=abc"}), "budget");
  EXPECT_EQ(ErrorKey("", {"no_such_key=1"}), "no_such_key");
  EXPECT_EQ(ErrorKey("", {"env.alpha_sat=3"}), "alpha_sat");
  EXPECT_EQ(ErrorKey("", {"agent.epsilon_start=2"}), "agent.epsilon_start");
  EXPECT_EQ(ErrorKey("", {"pid.window=0"}), "pid.window");
  EXPECT_EQ(ErrorKey("", {"algorithms=msbcb,bogus"}), "algorithms");
}

TEST(ParseConfigTest, ListsAndBooleans) {
  const ExperimentConfig config =
      ParseConfig("", {"algorithms=msbcb, contextual_bandit", "revenue_levels=1,2.5",
                       "env.deterministic_mode=true"});
  EXPECT_EQ(config.algorithms, (std::vector<std::string>{"msbcb", "contextual_bandit"}));
  EXPECT_EQ(config.revenue_levels, (std::vector<double>{1.0, 2.5}));
  EXPECT_TRUE(config.env.deterministic_mode);
}

TEST(ParseConfigTest, MalformedOverride) {
  EXPECT_THROW(ParseOverride("budget"), ConfigError);
  EXPECT_EQ(ParseOverride(" budget = 5 ").second, "5");
}

TEST(ParseConfigTest, MissingFileIsAnError) {
  EXPECT_THROW(ParseConfig("/nonexistent/msbcb.cfg"), Error);
}

TEST(ParseConfigTest, KnownKeysCoverEverySection) {
  const auto keys = KnownExperimentKeys();
  for (const char* key : {"budget", "env.request_rate", "agent.min_visits", "pid.alpha1",
                          "master_seed", "env.interest_max"}) {
    EXPECT_NE(std::find(keys.begin(), keys.end(), key), keys.end()) << key;
  }
}

TEST(LoadEnvConfigTest, ReadsUnprefixedKeys) {
  const auto path = ScratchDir() / "env.cfg";
  Spit(path, "n_users = 12\nT_max = 3\n");
  const EnvConfig env = LoadEnvConfig(path.string());
  EXPECT_EQ(env.n_users, 12);
  EXPECT_EQ(env.T_max, 3);
}

TEST(ShippedConfigsTest, AllParse) {
  for (const char* name : {"desk.cfg", "paper_scale.cfg"}) {
    const std::string path = std::string(MSBCB_CONFIG_DIR) + "/" + name;
    EXPECT_NO_THROW(ParseConfig(path)) << path;
  }
  EXPECT_EQ(ParseConfig(std::string(MSBCB_CONFIG_DIR) + "/paper_scale.cfg").budget,
            12000.0);
}

}  // namespace
}  // namespace msbcb
