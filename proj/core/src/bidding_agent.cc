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

#include "msbcb/bidding_agent.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "msbcb/csv.h"
#include "msbcb/errors.h"
#include "msbcb/knapsack.h"

namespace msbcb {

const char* AgentKindName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kMsbcb:
      return "msbcb";
    case AgentKind::kManualBid:
      return "manual_bid";
    case AgentKind::kContextualBandit:
      return "contextual_bandit";
    case AgentKind::kGreedyMaxCpr:
      return "greedy_maxcpr";
    case AgentKind::kBidGridQ:
      return "bid_grid_q";
  }
  return "?";
}

AgentKind ParseAgentKind(const std::string& name) {
  for (AgentKind kind : {AgentKind::kMsbcb, AgentKind::kManualBid,
                         AgentKind::kContextualBandit, AgentKind::kGreedyMaxCpr,
                         AgentKind::kBidGridQ}) {
    if (name == AgentKindName(kind)) return kind;
  }
  throw ConfigError("agent.kind", "unknown agent kind '" + name + "'");
}

double AgentConfig::Epsilon(int period) const {
  return std::max(epsilon_end, epsilon_start * std::pow(epsilon_decay, period));
}

void AgentConfig::Validate() const {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "agent.epsilon_start",
          "must be in [0, 1]");
  require(epsilon_end >= 0.0 && epsilon_end <= 1.0, "agent.epsilon_end",
          "must be in [0, 1]");
  require(epsilon_decay >= 0.0 && epsilon_decay <= 1.0, "agent.epsilon_decay",
          "must be in [0, 1]");
  require(n_buckets >= 1, "agent.n_buckets", "must be >= 1");
  require(max_displays >= 0, "agent.max_displays", "must be >= 0");
  require(manual_bid_price >= 0.0, "agent.manual_bid_price", "must be >= 0");
  require(learning_rate > 0.0 && learning_rate <= 1.0, "agent.learning_rate",
          "must be in (0, 1]");
  require(gamma >= 0.0 && gamma <= 1.0, "agent.gamma", "must be in [0, 1]");
  require(n_bid_levels >= 2, "agent.n_bid_levels", "must be >= 2");
  require(min_visits >= 0, "agent.min_visits", "must be >= 0");
}

DiscreteState Discretize(const UserState& state, const Ad& ad,
                         const AgentConfig& config, int t_max) {
  const double interest = Interest(state.interest, ad.topic);
  DiscreteState s;
  s.interest_bucket = std::clamp(
      static_cast<int>(std::floor(interest * config.n_buckets)), 0,
      config.n_buckets - 1);
  s.step = std::clamp(state.step, 0, std::max(t_max - 1, 0));
  s.displays_bucket = std::min(state.displays_so_far, config.max_displays);
  return s;
}

ValueEstimator::ValueEstimator(int n_buckets, int t_max, int max_displays,
                               int n_actions, double learning_rate, double gamma)
    : n_buckets_(n_buckets),
      t_max_(std::max(t_max, 1)),
      max_displays_(max_displays),
      n_actions_(n_actions),
      learning_rate_(learning_rate),
      gamma_(gamma) {
  if (n_buckets < 1 || max_displays < 0 || n_actions < 1) {
    throw ContractError("value estimator: invalid table dimensions");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ContractError("value estimator: learning_rate must be in (0, 1]");
  }
  const std::size_t states = static_cast<std::size_t>(n_buckets_) *
                             static_cast<std::size_t>(t_max_) *
                             static_cast<std::size_t>(max_displays_ + 1);
  const std::size_t slots = states * static_cast<std::size_t>(n_actions_);
  q_g_.assign(slots, 0.0);
  q_c_.assign(slots, 0.0);
  q_c_next_.assign(slots, 0.0);
  visits_.assign(slots, 0);
  v_g_.assign(states, 0.0);
  v_c_.assign(states, 0.0);
  state_visits_.assign(states, 0);
}

std::size_t ValueEstimator::StateIndex(const DiscreteState& s) const {
  if (s.interest_bucket < 0 || s.interest_bucket >= n_buckets_ || s.step < 0 ||
      s.step >= t_max_ || s.displays_bucket < 0 ||
      s.displays_bucket > max_displays_) {
    throw ContractError("discrete state out of range");
  }
  return (static_cast<std::size_t>(s.interest_bucket) * static_cast<std::size_t>(t_max_) +
          static_cast<std::size_t>(s.step)) *
             static_cast<std::size_t>(max_displays_ + 1) +
         static_cast<std::size_t>(s.displays_bucket);
}

DiscreteState ValueEstimator::StateAt(std::size_t index) const {
  DiscreteState s;
  const auto d = static_cast<std::size_t>(max_displays_ + 1);
  s.displays_bucket = static_cast<int>(index % d);
  index /= d;
  s.step = static_cast<int>(index % static_cast<std::size_t>(t_max_));
  s.interest_bucket = static_cast<int>(index / static_cast<std::size_t>(t_max_));
  return s;
}

std::size_t ValueEstimator::Slot(const DiscreteState& s, int a) const {
  if (a < 0 || a >= n_actions_) throw ContractError("action index out of range");
  return StateIndex(s) * static_cast<std::size_t>(n_actions_) +
         static_cast<std::size_t>(a);
}

void ValueEstimator::Set(const DiscreteState& s, int a, double q_g, double q_c,
                         double q_c_next) {
  const std::size_t k = Slot(s, a);
  q_g_[k] = q_g;
  q_c_[k] = q_c;
  q_c_next_[k] = q_c_next;
}

void ValueEstimator::SetStateValues(const DiscreteState& s, double v_g, double v_c) {
  const std::size_t k = StateIndex(s);
  v_g_[k] = v_g;
  v_c_[k] = v_c;
}

void ValueEstimator::TdUpdate(const Transition& t) {
  double boot_g = 0.0;
  double boot_c = 0.0;
  if (!t.terminal) {
    const std::size_t next = StateIndex(t.next_state);
    boot_g = gamma_ * v_g_[next];
    boot_c = gamma_ * v_c_[next];
  }
  const std::size_t k = Slot(t.state, t.action);
  const double lr = std::max(learning_rate_, 1.0 / static_cast<double>(++visits_[k]));
  q_g_[k] += lr * (t.value + boot_g - q_g_[k]);
  q_c_[k] += lr * (t.cost + boot_c - q_c_[k]);
  q_c_next_[k] += lr * (boot_c - q_c_next_[k]);

  const std::size_t s = StateIndex(t.state);
  const double lr_s =
      std::max(learning_rate_, 1.0 / static_cast<double>(++state_visits_[s]));
  v_g_[s] += lr_s * (t.value + boot_g - v_g_[s]);
  v_c_[s] += lr_s * (t.cost + boot_c - v_c_[s]);
}

void ValueEstimator::WriteCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "state,action,q_g,q_c,q_c_next,visits\n";
  for (std::size_t si = 0; si < n_states(); ++si) {
    const DiscreteState s = StateAt(si);
    for (int a = 0; a < n_actions_; ++a) {
      const std::size_t k = Slot(s, a);
      out << s.interest_bucket << ":" << s.step << ":" << s.displays_bucket << ","
          << a << "," << FormatDouble(q_g_[k]) << "," << FormatDouble(q_c_[k])
          << "," << FormatDouble(q_c_next_[k]) << "," << visits_[k] << "\n";
    }
  }
}

double CombinedQ(const ValueEstimator& est, const DiscreteState& s, int a,
                 double cpr_thr) {
  return est.q_g(s, a) - cpr_thr * est.q_c(s, a);
}

int GreedyAction(const ValueEstimator& est, const DiscreteState& s, double cpr_thr) {
  return CombinedQ(est, s, 1, cpr_thr) > CombinedQ(est, s, 0, cpr_thr) ? 1 : 0;
}

int GreedyActionIndex(const ValueEstimator& est, const DiscreteState& s,
                      double cpr_thr) {
  int best = 0;
  double best_q = CombinedQ(est, s, 0, cpr_thr);
  for (int a = 1; a < est.n_actions(); ++a) {
    const double q = CombinedQ(est, s, a, cpr_thr);
    if (q > best_q) {
      best = a;
      best_q = q;
    }
  }
  return best;
}

double BidMargin(const ValueEstimator& est, const DiscreteState& s, double cpr_thr) {
  if (!(cpr_thr > 0.0)) throw ContractError("optimal_bid: cpr_thr must be > 0");
  return (est.q_g(s, 1) / cpr_thr - est.q_c_next(s, 1)) -
         (est.q_g(s, 0) / cpr_thr - est.q_c_next(s, 0));
}

double OptimalBid(const ValueEstimator& est, const DiscreteState& s,
                  double cpr_thr, const Ad& ad, double pctr, double pcvr,
                  double bid_max) {
  double bid = BidMargin(est, s, cpr_thr);
  if (ad.pricing == PricingModel::kCpc) {
    if (!(pctr > 0.0 && pctr <= 1.0)) throw ContractError("optimal_bid: pctr must be in (0, 1]");
    bid /= pctr;
  } else if (ad.pricing == PricingModel::kCps) {
    if (!(pctr > 0.0 && pctr <= 1.0 && pcvr > 0.0 && pcvr <= 1.0)) {
      throw ContractError("optimal_bid: pctr and pcvr must be in (0, 1]");
    }
    bid /= pctr * pcvr;
  }
  return std::clamp(bid, 0.0, bid_max);
}

double BidLevel(int k, int n_levels, double bid_max) {
  return bid_max * static_cast<double>(k) / static_cast<double>(n_levels - 1);
}

namespace {

double MyopicBid(const UserState& state, const Ad& ad, const EnvConfig& env,
                 double cpr_thr) {
  if (!(cpr_thr > 0.0)) throw ContractError("contextual bandit: cpr_thr must be > 0");
  const double pctr = Interest(state.interest, ad.topic);
  const double pcvr = Satisfaction(state.interest, ad.topic, ad.quality, env.alpha_sat);
  const double immediate = ad.item_price * pctr * pcvr;
  double per_unit = 1.0;  // expected charge events per display
  if (ad.pricing == PricingModel::kCpc) per_unit = pctr;
  if (ad.pricing == PricingModel::kCps) per_unit = pctr * pcvr;
  if (!(per_unit > 0.0)) return 0.0;
  return std::clamp(immediate / (cpr_thr * per_unit), 0.0, env.bid_max);
}

const ValueEstimator& RequireEstimator(const ActContext& ctx) {
  if (ctx.estimator == nullptr) throw ContractError("act: agent needs a value estimator");
  return *ctx.estimator;
}

}  // namespace

Action Act(const AgentConfig& agent, const ActContext& ctx,
           const UserState& state, const Ad& ad, const EnvConfig& env, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (agent.kind) {
    case AgentKind::kManualBid:
      return {std::min(agent.manual_bid_price, env.bid_max), -1};
    case AgentKind::kContextualBandit:
      return {MyopicBid(state, ad, env, ctx.cpr_thr), -1};
    case AgentKind::kMsbcb: {
      const ValueEstimator& est = RequireEstimator(ctx);
      if (unit(rng) < ctx.epsilon) {
        return {unit(rng) < 0.5 ? env.bid_max : 0.0, -1};
      }
      const DiscreteState s = Discretize(state, ad, agent, env.T_max);
      const double pctr = Interest(state.interest, ad.topic);
      const double pcvr =
          Satisfaction(state.interest, ad.topic, ad.quality, env.alpha_sat);
      if (ad.pricing != PricingModel::kCpm && !(pctr * pcvr > 0.0)) return {0.0, -1};
      return {OptimalBid(est, s, ctx.cpr_thr, ad, pctr, pcvr, env.bid_max), -1};
    }
    case AgentKind::kBidGridQ: {
      const ValueEstimator& est = RequireEstimator(ctx);
      int level = 0;
      if (unit(rng) < ctx.epsilon) {
        std::uniform_int_distribution<int> pick(0, est.n_actions() - 1);
        level = pick(rng);
      } else {
        level = GreedyActionIndex(est, Discretize(state, ad, agent, env.T_max),
                                  ctx.cpr_thr);
      }
      return {BidLevel(level, est.n_actions(), env.bid_max), level};
    }
    case AgentKind::kGreedyMaxCpr:
      break;
  }
  throw ConfigError("agent.kind", std::string("agent kind '") +
                                      AgentKindName(agent.kind) +
                                      "' cannot bid online");
}

CprEstimate UserCprEstimate(const ValueEstimator& est, const DiscreteState& s) {
  CprEstimate e;
  e.v_g = est.v_g(s);
  e.v_c = est.v_c(s);
  e.cpr = Cpr(std::max(e.v_g, 0.0), std::max(e.v_c, 0.0));
  return e;
}

}  // namespace msbcb
