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

#include <algorithm>
#include <cmath>

#include "msbcb/errors.h"

namespace msbcb {

void PidConfig::Validate() const {
  if (!(initial_thr > 0.0)) throw ConfigError("pid.initial_thr", "must be > 0");
  if (!(alpha1 >= 0.0)) throw ConfigError("pid.alpha1", "must be >= 0");
  if (!(alpha2 >= 0.0)) throw ConfigError("pid.alpha2", "must be >= 0");
  if (window < 1) throw ConfigError("pid.window", "must be >= 1");
  const double lo = floor > 0.0 ? floor : 1e-6 * initial_thr;
  if (!(ceiling > lo)) throw ConfigError("pid.ceiling", "must exceed the floor");
  if (initial_thr < lo || initial_thr > ceiling) {
    throw ConfigError("pid.initial_thr", "must lie within [floor, ceiling]");
  }
}

PidController::PidController(const PidConfig& config)
    : config_(config),
      floor_(config.floor > 0.0 ? config.floor : 1e-6 * config.initial_thr),
      ceiling_(config.ceiling),
      cpr_thr_(config.initial_thr) {
  config_.Validate();
}

void PidController::Update(double cost, double budget) {
  if (!(budget > 0.0)) throw ContractError("pid_update: budget must be > 0");
  if (!(cost >= 0.0)) throw ContractError("pid_update: cost must be >= 0");
  window_.push_back(cost);
  while (static_cast<int>(window_.size()) > config_.window) window_.pop_front();
  all_costs_.push_back(cost);

  double window_cost = 0.0;
  for (double c : window_) window_cost += c;
  window_cost += static_cast<double>(config_.window - static_cast<int>(window_.size())) * budget;

  const double multiplier =
      1.0 + config_.alpha1 * (cost / budget - 1.0) +
      config_.alpha2 * (window_cost / (static_cast<double>(config_.window) * budget) - 1.0);
  cpr_thr_ = std::clamp(cpr_thr_ * multiplier, floor_, ceiling_);
}

bool PidController::HasConverged(double budget, double tol, int k) const {
  if (!(tol > 0.0)) throw ContractError("has_converged: tol must be > 0");
  if (k < 1 || static_cast<int>(all_costs_.size()) < k) return false;
  return std::all_of(all_costs_.end() - k, all_costs_.end(), [&](double c) {
    return std::abs(c - budget) <= tol * budget;
  });
}

}  // namespace msbcb
