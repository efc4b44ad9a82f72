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

#ifndef MSBCB_BIDDING_AGENT_H_
#define MSBCB_BIDDING_AGENT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msbcb/sim_env.h"

namespace msbcb {

enum class AgentKind {
  kMsbcb,             // reduced binary action + closed-form bid
  kManualBid,         // constant bid
  kContextualBandit,  // myopic: immediate expected value / thr
  kGreedyMaxCpr,      // oracle only; cannot act online
  kBidGridQ,          // ablation: Q-learning over a discretized bid grid
};

const char* AgentKindName(AgentKind kind);
AgentKind ParseAgentKind(const std::string& name);

struct AgentConfig {
  AgentKind kind = AgentKind::kMsbcb;
  // epsilon(period) = max(epsilon_end, epsilon_start * epsilon_decay^period)
  double epsilon_start = 0.3;
  double epsilon_end = 0.005;
  double epsilon_decay = 0.9;
  int n_buckets = 20;
  int max_displays = 0;
  double manual_bid_price = 0.7;
  double learning_rate = 0.01;
  double gamma = 1.0;
  int n_bid_levels = 11;
  // States visited fewer times than this are always selected.
  int min_visits = 20;

  double Epsilon(int period) const;
  void Validate() const;
};

struct DiscreteState {
  int interest_bucket = 0;
  int step = 0;
  int displays_bucket = 0;

  friend bool operator==(const DiscreteState&, const DiscreteState&) = default;
};

DiscreteState Discretize(const UserState& state, const Ad& ad,
                         const AgentConfig& config, int t_max);

struct Transition {
  DiscreteState state;
  int action = 0;  // 1 = displayed for the binary agent; bid level otherwise
  double value = 0.0;
  double cost = 0.0;
  DiscreteState next_state;
  bool terminal = false;
};

// Tabular Q_G, Q_C, Q_C^next over (state, action) and V_G, V_C over states.
// The effective step size of an entry is max(learning_rate, 1 / visits), i.e.
// a sample average until the visit count passes 1 / learning_rate.
class ValueEstimator {
 public:
  ValueEstimator(int n_buckets, int t_max, int max_displays, int n_actions,
                 double learning_rate, double gamma);

  int n_actions() const { return n_actions_; }
  std::size_t n_states() const { return v_g_.size(); }
  double learning_rate() const { return learning_rate_; }
  double gamma() const { return gamma_; }

  std::size_t StateIndex(const DiscreteState& s) const;
  DiscreteState StateAt(std::size_t index) const;

  double q_g(const DiscreteState& s, int a) const { return q_g_[Slot(s, a)]; }
  double q_c(const DiscreteState& s, int a) const { return q_c_[Slot(s, a)]; }
  double q_c_next(const DiscreteState& s, int a) const { return q_c_next_[Slot(s, a)]; }
  std::int64_t visits(const DiscreteState& s, int a) const { return visits_[Slot(s, a)]; }
  double v_g(const DiscreteState& s) const { return v_g_[StateIndex(s)]; }
  double v_c(const DiscreteState& s) const { return v_c_[StateIndex(s)]; }
  std::int64_t state_visits(const DiscreteState& s) const { return state_visits_[StateIndex(s)]; }

  // Direct table access for tests and checkpoint loading.
  void Set(const DiscreteState& s, int a, double q_g, double q_c, double q_c_next);
  void SetStateValues(const DiscreteState& s, double v_g, double v_c);

  void TdUpdate(const Transition& t);

  // `state,action,q_g,q_c,q_c_next,visits`; state is "bucket:step:displays".
  void WriteCsv(const std::string& path) const;

 private:
  std::size_t Slot(const DiscreteState& s, int a) const;

  int n_buckets_;
  int t_max_;
  int max_displays_;
  int n_actions_;
  double learning_rate_;
  double gamma_;
  std::vector<double> q_g_, q_c_, q_c_next_;
  std::vector<std::int64_t> visits_;
  std::vector<double> v_g_, v_c_;
  std::vector<std::int64_t> state_visits_;
};

// Q_G(s, a) - thr * Q_C(s, a).
double CombinedQ(const ValueEstimator& est, const DiscreteState& s, int a,
                 double cpr_thr);

// Binary greedy action: 1 iff CombinedQ(s, 1) > CombinedQ(s, 0).
int GreedyAction(const ValueEstimator& est, const DiscreteState& s, double cpr_thr);

// Generalized argmax over all actions (ties -> lowest index).
int GreedyActionIndex(const ValueEstimator& est, const DiscreteState& s,
                      double cpr_thr);

// Closed-form regretless bid for the binary action space:
//   [Q_G(s,1)/thr - Q_C^next(s,1)] - [Q_G(s,0)/thr - Q_C^next(s,0)]
// divided by pctr (CPC) or pctr * pcvr (CPS), clamped to [0, bid_max].
// Throws ContractError for thr <= 0 or non-positive pctr/pcvr where needed.
double OptimalBid(const ValueEstimator& est, const DiscreteState& s,
                  double cpr_thr, const Ad& ad, double pctr, double pcvr,
                  double bid_max);

// The unclamped bracket of OptimalBid (CPM units).
double BidMargin(const ValueEstimator& est, const DiscreteState& s, double cpr_thr);

// Level k of an n-level uniform grid on [0, bid_max].
double BidLevel(int k, int n_levels, double bid_max);

struct ActContext {
  const ValueEstimator* estimator = nullptr;  // MSBCB / BidGridQ only
  double cpr_thr = 1.0;
  double epsilon = 0.0;
};

struct Action {
  double bid = 0.0;
  int level = -1;  // chosen grid level for BidGridQ
};

// Online bid for the given agent kind. Throws ConfigError for kinds that
// cannot act (GreedyMaxCpr).
Action Act(const AgentConfig& agent, const ActContext& ctx,
           const UserState& state, const Ad& ad, const EnvConfig& env, Rng& rng);

struct CprEstimate {
  double v_g = 0.0;
  double v_c = 0.0;
  double cpr = 0.0;
};

CprEstimate UserCprEstimate(const ValueEstimator& est, const DiscreteState& s);

}  // namespace msbcb

#endif  // MSBCB_BIDDING_AGENT_H_
