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

#ifndef MSBCB_SIM_ENV_H_
#define MSBCB_SIM_ENV_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace msbcb {

// All stochastic components draw from this engine. Streams are derived from
// (seed, tag...) tuples via DeriveRng so that every worker is independent and
// reproducible.
using Rng = std::mt19937_64;

Rng DeriveRng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// splitmix64 finalizer; used for seeded per-(user, step) hashing.
std::uint64_t MixHash(std::uint64_t x);

// Degree of topical affinity, entries in [0, 1].
using TopicVector = std::vector<double>;

enum class PricingModel { kCpm, kCpc, kCps };

const char* PricingModelName(PricingModel model);
PricingModel ParsePricingModel(const std::string& name);

struct Ad {
  int id = 0;
  TopicVector topic;
  double quality = 0.0;     // Q_d in [0, 1]
  double item_price = 1.0;  // revenue on purchase, > 0
  PricingModel pricing = PricingModel::kCpm;
};

struct UserState {
  int user_id = 0;
  TopicVector interest;
  int step = 0;
  // Number of requests this user issues in an episode (<= T_max).
  int horizon = 0;
  int displays_so_far = 0;
  int clicks_so_far = 0;
  bool purchased = false;
  int channel = 0;

  bool terminal() const { return purchased || step >= horizon; }
};

struct StepOutcome {
  double value = 0.0;
  double cost = 0.0;
  bool won = false;
  bool clicked = false;
  bool purchased = false;
  double second_price = 0.0;
  // CTR * CVR of this step when displayed, 0 otherwise. In expected-value mode
  // `value` and `cost` are conditional on no earlier purchase; callers weight
  // them by survival using this probability.
  double purchase_prob = 0.0;
  UserState next_state;
  bool terminal = false;
};

struct EnvConfig {
  int n_users = 200;
  int n_ads = 1;
  int n_topics = 5;
  int T_max = 6;
  // Initial interest in every topic is drawn from U[0, interest_max].
  double interest_max = 1.0;
  double alpha_sat = 0.5;
  double beta_mean = 0.6;
  double beta_halfwidth = 0.4;
  double gamma_interest = 1.0;
  double bid_max = 5.0;
  double competitor_scale = 0.5;
  // Log-space standard deviation of the highest competing bid.
  double competitor_sigma = 0.5;
  // Mean number of requests per user per episode (Poisson arrivals on [0, 1)).
  double request_rate = 30.0;
  int n_channels = 3;
  std::uint64_t seed = 1;
  bool deterministic_mode = false;

  // Throws ConfigError naming the first invalid field.
  void Validate() const;
};

// Request of one user on one channel. `index` is the per-user step.
struct Request {
  int user_id = 0;
  int index = 0;
  double time = 0.0;
  int channel = 0;
};

// --- Topic / user model ----------------------------------------------------

std::vector<UserState> SampleUsers(const EnvConfig& config, Rng& rng);

// Ads carry a single dominant category, quality ~ U[0.5, 1] and price ~ U[5, 15].
std::vector<Ad> SampleAds(const EnvConfig& config, Rng& rng);

// u . d clamped to [0, 1]. Throws DimensionError on length mismatch.
double Interest(const TopicVector& u, const TopicVector& d);

double Satisfaction(const TopicVector& u, const TopicVector& d, double quality,
                    double alpha_sat);

// clamp(gamma * u + beta * S * d, 0, 1). beta ~ U[mean - hw, mean + hw] in
// stochastic mode; beta = mean in deterministic mode (rng untouched).
TopicVector UpdateInterest(const TopicVector& u, const TopicVector& d,
                           double satisfaction, const EnvConfig& config,
                           Rng& rng);

// --- Market ------------------------------------------------------------------

// Highest competing bid: log-normal with median competitor_scale, truncated at
// bid_max.
double DrawSecondPrice(const EnvConfig& config, Rng& rng);

// Same distribution, but a fixed function of (config.seed, user, step).
double FrozenSecondPrice(const EnvConfig& config, int user_id, int step);

// One request of the user/ad MDP. The auction is won iff bid > second price.
// Throws ContractError when bid is outside [0, bid_max] or the state is
// terminal.
StepOutcome EnvStep(const UserState& state, const Ad& ad, double bid,
                    const EnvConfig& config, Rng& rng);

// Per-user Poisson arrivals on [0, 1), at most T_max each, merged in
// (time, user_id) order. Sets nothing on `users`; see ApplyRequestCounts.
std::vector<Request> GenerateRequests(const std::vector<UserState>& users,
                                      const EnvConfig& config, Rng& rng);

void ApplyRequestCounts(const std::vector<Request>& requests,
                        std::vector<UserState>& users);

// A fixed world: ads, initial user states and the frozen request schedule.
struct Population {
  EnvConfig config;
  std::vector<Ad> ads;
  std::vector<UserState> users;
  std::vector<Request> requests;

  const Ad& ad() const { return ads.front(); }
};

Population BuildPopulation(const EnvConfig& config);

}  // namespace msbcb

#endif  // MSBCB_SIM_ENV_H_
