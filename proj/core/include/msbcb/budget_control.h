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

#ifndef MSBCB_BUDGET_CONTROL_H_
#define MSBCB_BUDGET_CONTROL_H_

#include <deque>
#include <vector>

namespace msbcb {

struct PidConfig {
  double initial_thr = 4.0;
  double alpha1 = 0.2;
  double alpha2 = 0.05;
  int window = 5;
  // Non-positive floor means 1e-6 * initial_thr.
  double floor = 0.0;
  double ceiling = 1e6;

  void Validate() const;
};

// Multiplicative threshold feedback:
//   thr *= 1 + a1 (cost_t / B - 1) + a2 (sum of last n costs / (n B) - 1)
// The window is padded with B until n periods have been observed.
class PidController {
 public:
  explicit PidController(const PidConfig& config);

  double cpr_thr() const { return cpr_thr_; }
  double floor() const { return floor_; }
  double ceiling() const { return ceiling_; }
  const PidConfig& config() const { return config_; }
  const std::deque<double>& cost_history() const { return window_; }
  const std::vector<double>& all_costs() const { return all_costs_; }

  // Throws ContractError for budget <= 0 or cost < 0.
  void Update(double cost, double budget);

  // Last k period costs all within tol * B of B.
  bool HasConverged(double budget, double tol, int k) const;

 private:
  PidConfig config_;
  double floor_;
  double ceiling_;
  double cpr_thr_;
  std::deque<double> window_;
  std::vector<double> all_costs_;
};

}  // namespace msbcb

#endif  // MSBCB_BUDGET_CONTROL_H_
