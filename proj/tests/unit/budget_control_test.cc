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


#include "msbcb/budget_control.h"

#include <gtest/gtest.h>

#include "msbcb/errors.h"

namespace msbcb {
namespace {

PidConfig Gains(double thr, double a1, double a2) {
  PidConfig config;
  config.initial_thr = thr;
  config.alpha1 = a1;
  config.alpha2 = a2;
  return config;
}

TEST(PidUpdateTest, ZeroErrorKeepsThreshold) {
  PidController pid(Gains(3.0, 0.2, 0.05));
  for (int k = 0; k < 7; ++k) pid.Update(100.0, 100.0);
  EXPECT_DOUBLE_EQ(pid.cpr_thr(), 3.0);
}

TEST(PidUpdateTest, ProportionalTerm) {
  PidController pid(Gains(10.0, 0.2, 0.0));
  pid.Update(150.0, 100.0);
  EXPECT_DOUBLE_EQ(pid.cpr_thr(), 11.0);
}

TEST(PidUpdateTest, WindowTerm) {
  PidConfig config = Gains(10.0, 0.0, 0.1);
  config.window = 1;
  PidController pid(config);
  pid.Update(50.0, 100.0);
  EXPECT_DOUBLE_EQ(pid.cpr_thr(), 9.5);
}

TEST(PidUpdateTest, ShortHistoryIsPaddedWithBudget) {
  PidController pid(Gains(10.0, 0.0, 0.1));
  pid.Update(50.0, 100.0);
  EXPECT_DOUBLE_EQ(pid.cpr_thr(), 10.0 * (1.0 + 0.1 * (450.0 / 500.0 - 1.0)));
  EXPECT_EQ(pid.cost_history().size(), 1u);
}

TEST(PidUpdateTest, ClampsToFloorAndCeiling) {
  PidConfig config = Gains(1.0, 10.0, 0.0);
  config.floor = 0.5;
  config.ceiling = 2.0;
  PidController pid(config);
  pid.Update(0.0, 100.0);
  EXPECT_EQ(pid.cpr_thr(), 0.5);
  pid.Update(1000.0, 100.0);
  EXPECT_EQ(pid.cpr_thr(), 2.0);
}

TEST(PidUpdateTest, RejectsBadInputs) {
  PidController pid(Gains(1.0, 0.2, 0.05));
  EXPECT_THROW(pid.Update(1.0, 0.0), ContractError);
  EXPECT_THROW(pid.Update(-1.0, 1.0), ContractError);
  EXPECT_THROW(PidController(Gains(0.0, 0.2, 0.05)), ConfigError);
}

TEST(HasConvergedTest, Examples) {
  PidController exact(Gains(1.0, 0.0, 0.0));
  for (int k = 0; k < 5; ++k) exact.Update(100.0, 100.0);
  EXPECT_TRUE(exact.HasConverged(100.0, 0.02, 5));

  PidController overshoot(Gains(1.0, 0.0, 0.0));
  for (int k = 0; k < 4; ++k) overshoot.Update(100.0, 100.0);
  overshoot.Update(110.0, 100.0);
  EXPECT_FALSE(overshoot.HasConverged(100.0, 0.02, 5));

  PidController wobble(Gains(1.0, 0.0, 0.0));
  for (int k = 0; k < 6; ++k) wobble.Update(k % 2 ? 101.0 : 99.0, 100.0);
  EXPECT_TRUE(wobble.HasConverged(100.0, 0.02, 5));
  EXPECT_FALSE(PidController(Gains(1.0, 0.0, 0.0)).HasConverged(100.0, 0.02, 1));
}

}  // namespace
}  // namespace msbcb
