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

#ifndef MSBCB_PROPERTY_SUITES_H_
#define MSBCB_PROPERTY_SUITES_H_

#include <cstdint>
#include <string>

namespace msbcb {

// Randomized checks shared by the CLI, the unit tests and the acceptance
// binary. Every report carries the seed it was generated from.

enum class KnapsackFamily {
  // n in [50, 500], every cost <= 0.001 * B.
  kSmallItems,
  // n in [50, 500], integer costs in [1, 50], B = half the total cost.
  kTight,
};

const char* KnapsackFamilyName(KnapsackFamily family);

struct GreedyBoundReport {
  std::uint64_t seed = 0;
  int instances = 0;
  int violations = 0;
  int budget_binding = 0;       // instances where the exact optimum leaves items out
  double min_ratio = 1.0;       // min greedy / exact over instances
  double min_slack = 0.0;       // min (greedy - lambda * exact) / exact
  double seconds = 0.0;
};

// greedy_value >= (1 - max c / B) * exact_value on random instances.
GreedyBoundReport RunGreedyBoundSuite(int instances, std::uint64_t seed,
                                      KnapsackFamily family);

struct RegretlessBidReport {
  std::uint64_t seed = 0;
  int tuples = 0;
  int violations = 0;
  double seconds = 0.0;
};

// Random (Q_G, Q_C^next, thr, second price, pricing model) tuples: the auction
// outcome of the closed-form bid must equal the binary argmax of
// Q_G - thr * Q_C.
RegretlessBidReport RunRegretlessBidSuite(int tuples, std::uint64_t seed);

struct DistanceArgmaxReport {
  std::uint64_t seed = 0;
  int menus = 0;
  int mismatches = 0;
  double max_identity_rel_error = 0.0;
  double seconds = 0.0;
};

// Vertical-distance argmax vs threshold-objective argmax on random menus (half
// synthetic, half enumerated from random users).
DistanceArgmaxReport RunDistanceArgmaxSuite(int menus, std::uint64_t seed);

struct FrontierReport {
  std::uint64_t seed = 0;
  int menus = 0;
  int violations = 0;
  double seconds = 0.0;
};

// Budget-constrained best v_g must be nondecreasing along an ascending grid.
FrontierReport RunFrontierSuite(int menus, std::uint64_t seed);

std::string FormatReport(const GreedyBoundReport& r, KnapsackFamily family);
std::string FormatReport(const RegretlessBidReport& r);
std::string FormatReport(const DistanceArgmaxReport& r);
std::string FormatReport(const FrontierReport& r);

}  // namespace msbcb

#endif  // MSBCB_PROPERTY_SUITES_H_
