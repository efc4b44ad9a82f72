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


#ifndef MSBCB_TESTS_UNIT_TEST_UTIL_H_
#define MSBCB_TESTS_UNIT_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

#include "msbcb/orchestrator.h"

namespace msbcb::testing {

// Fresh per-test directory under the system temp dir.
inline std::filesystem::path ScratchDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "msbcb_tests" /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void Spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

// A population and schedule small enough for unit tests.
inline ExperimentConfig TinyConfig() {
  ExperimentConfig config;
  config.env.n_users = 40;
  config.env.T_max = 4;
  config.episodes_per_period = 80;
  config.budget = 60.0;
  config.n_periods = 4;
  config.oracle_resolution = 1e-4;
  return config;
}

}  // namespace msbcb::testing

#endif  // MSBCB_TESTS_UNIT_TEST_UTIL_H_
