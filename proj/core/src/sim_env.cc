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

#include "msbcb/sim_env.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "msbcb/errors.h"

namespace msbcb {

std::uint64_t MixHash(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng DeriveRng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = MixHash(seed);
  for (std::uint64_t tag : tags) h = MixHash(h ^ MixHash(tag + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

const char* PricingModelName(PricingModel model) {
  switch (model) {
    case PricingModel::kCpm:
      return "CPM";
    case PricingModel::kCpc:
      return "CPC";
    case PricingModel::kCps:
      return "CPS";
  }
  return "?";
}

PricingModel ParsePricingModel(const std::string& name) {
  if (name == "CPM" || name == "cpm") return PricingModel::kCpm;
  if (name == "CPC" || name == "cpc") return PricingModel::kCpc;
  if (name == "CPS" || name == "cps") return PricingModel::kCps;
  throw ConfigError("pricing_model", "unknown pricing model '" + name + "'");
}

void EnvConfig::Validate() const {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(n_users >= 0, "n_users", "must be >= 0");
  require(n_ads >= 1, "n_ads", "must be >= 1");
  require(n_topics >= 1, "n_topics", "must be >= 1");
  require(T_max >= 0, "T_max", "must be >= 0");
  require(alpha_sat >= 0.0 && alpha_sat <= 1.0, "alpha_sat", "must be in [0, 1]");
  require(interest_max > 0.0 && interest_max <= 1.0, "interest_max", "must be in (0, 1]");
  require(beta_halfwidth >= 0.0, "beta_halfwidth", "must be >= 0");
  require(beta_mean - beta_halfwidth >= -1.0 && beta_mean + beta_halfwidth <= 1.0,
          "beta_mean", "beta support must lie in [-1, 1]");
  require(gamma_interest >= 0.0 && gamma_interest <= 1.0, "gamma_interest",
          "must be in [0, 1]");
  require(bid_max > 0.0 && std::isfinite(bid_max), "bid_max", "must be > 0");
  require(competitor_scale > 0.0, "competitor_scale", "must be > 0");
  require(competitor_sigma >= 0.0, "competitor_sigma", "must be >= 0");
  require(request_rate > 0.0, "request_rate", "must be > 0");
  require(n_channels >= 1, "n_channels", "must be >= 1");
}

std::vector<UserState> SampleUsers(const EnvConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<UserState> users(static_cast<std::size_t>(config.n_users));
  for (int i = 0; i < config.n_users; ++i) {
    UserState& user = users[static_cast<std::size_t>(i)];
    user.user_id = i;
    user.interest.resize(static_cast<std::size_t>(config.n_topics));
    for (double& x : user.interest) x = config.interest_max * unit(rng);
    user.horizon = config.T_max;
  }
  return users;
}

std::vector<Ad> SampleAds(const EnvConfig& config, Rng& rng) {
  std::uniform_int_distribution<int> topic(0, config.n_topics - 1);
  std::uniform_real_distribution<double> quality(0.5, 1.0);
  std::uniform_real_distribution<double> price(5.0, 15.0);
  std::vector<Ad> ads(static_cast<std::size_t>(config.n_ads));
  for (int j = 0; j < config.n_ads; ++j) {
    Ad& ad = ads[static_cast<std::size_t>(j)];
    ad.id = j;
    ad.topic.assign(static_cast<std::size_t>(config.n_topics), 0.0);
    ad.topic[static_cast<std::size_t>(topic(rng))] = 1.0;
    ad.quality = quality(rng);
    ad.item_price = price(rng);
  }
  return ads;
}

double Interest(const TopicVector& u, const TopicVector& d) {
  if (u.size() != d.size()) {
    throw DimensionError("interest: vector lengths differ (" +
                         std::to_string(u.size()) + " vs " +
                         std::to_string(d.size()) + ")");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * d[k];
  return std::clamp(dot, 0.0, 1.0);
}

double Satisfaction(const TopicVector& u, const TopicVector& d, double quality,
                    double alpha_sat) {
  return (1.0 - alpha_sat) * Interest(u, d) + alpha_sat * quality;
}

TopicVector UpdateInterest(const TopicVector& u, const TopicVector& d,
                           double satisfaction, const EnvConfig& config,
                           Rng& rng) {
  if (u.size() != d.size()) throw DimensionError("update_interest: vector lengths differ");
  double beta = config.beta_mean;
  if (!config.deterministic_mode && config.beta_halfwidth > 0.0) {
    std::uniform_real_distribution<double> dist(
        config.beta_mean - config.beta_halfwidth,
        config.beta_mean + config.beta_halfwidth);
    beta = dist(rng);
  }
  TopicVector out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    out[k] = std::clamp(config.gamma_interest * u[k] + beta * satisfaction * d[k],
                        0.0, 1.0);
  }
  return out;
}

namespace {

double LogNormalPrice(const EnvConfig& config, Rng& rng) {
  std::lognormal_distribution<double> dist(std::log(config.competitor_scale),
                                           config.competitor_sigma);
  return std::min(dist(rng), config.bid_max);
}

}  // namespace

double DrawSecondPrice(const EnvConfig& config, Rng& rng) {
  return LogNormalPrice(config, rng);
}

double FrozenSecondPrice(const EnvConfig& config, int user_id, int step) {
  Rng rng = DeriveRng(config.seed, {0x5eed'0f'0f'1ceULL,
                                    static_cast<std::uint64_t>(user_id),
                                    static_cast<std::uint64_t>(step)});
  return LogNormalPrice(config, rng);
}

StepOutcome EnvStep(const UserState& state, const Ad& ad, double bid,
                    const EnvConfig& config, Rng& rng) {
  if (!(bid >= 0.0 && bid <= config.bid_max)) {
    throw ContractError("env_step: bid " + std::to_string(bid) +
                        " outside [0, bid_max]");
  }
  if (state.terminal()) throw ContractError("env_step: state is terminal");

  StepOutcome out;
  out.second_price = config.deterministic_mode
                         ? FrozenSecondPrice(config, state.user_id, state.step)
                         : DrawSecondPrice(config, rng);
  out.won = bid > out.second_price;
  out.next_state = state;
  out.next_state.step = state.step + 1;

  if (out.won) {
    const double ctr = Interest(state.interest, ad.topic);
    const double cvr = Satisfaction(state.interest, ad.topic, ad.quality,
                                    config.alpha_sat);
    out.purchase_prob = ctr * cvr;
    out.next_state.displays_so_far += 1;

    if (config.deterministic_mode) {
      out.value = ad.item_price * ctr * cvr;
      switch (ad.pricing) {
        case PricingModel::kCpm:
          out.cost = out.second_price;
          break;
        case PricingModel::kCpc:
          out.cost = out.second_price * ctr;
          break;
        case PricingModel::kCps:
          out.cost = out.second_price * ctr * cvr;
          break;
      }
    } else {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double click_draw = unit(rng);
      const double buy_draw = unit(rng);
      out.clicked = click_draw < ctr;
      out.purchased = out.clicked && buy_draw < cvr;
      if (out.purchased) out.value = ad.item_price;
      switch (ad.pricing) {
        case PricingModel::kCpm:
          out.cost = out.second_price;
          break;
        case PricingModel::kCpc:
          out.cost = out.clicked ? out.second_price : 0.0;
          break;
        case PricingModel::kCps:
          out.cost = out.purchased ? out.second_price : 0.0;
          break;
      }
      if (out.clicked) out.next_state.clicks_so_far += 1;
      out.next_state.purchased = out.purchased;
    }
    out.next_state.interest =
        UpdateInterest(state.interest, ad.topic, cvr, config, rng);
  }
  out.terminal = out.next_state.terminal();
  return out;
}

std::vector<Request> GenerateRequests(const std::vector<UserState>& users,
                                      const EnvConfig& config, Rng& rng) {
  std::exponential_distribution<double> gap(config.request_rate);
  std::uniform_int_distribution<int> channel(0, config.n_channels - 1);
  std::vector<Request> stream;
  for (const UserState& user : users) {
    double t = 0.0;
    for (int k = 0; k < config.T_max; ++k) {
      t += gap(rng);
      if (t >= 1.0) break;
      stream.push_back(Request{user.user_id, k, t, channel(rng)});
    }
  }
  std::stable_sort(stream.begin(), stream.end(),
                   [](const Request& a, const Request& b) {
                     if (a.time != b.time) return a.time < b.time;
                     if (a.user_id != b.user_id) return a.user_id < b.user_id;
                     return a.index < b.index;
                   });
  return stream;
}

void ApplyRequestCounts(const std::vector<Request>& requests,
                        std::vector<UserState>& users) {
  std::vector<int> counts(users.size(), 0);
  std::vector<int> first_channel(users.size(), 0);
  for (const Request& r : requests) {
    const auto idx = static_cast<std::size_t>(r.user_id);
    if (idx >= users.size()) throw ContractError("request for unknown user");
    if (r.index == 0) first_channel[idx] = r.channel;
    counts[idx] = std::max(counts[idx], r.index + 1);
  }
  for (std::size_t i = 0; i < users.size(); ++i) {
    users[i].horizon = counts[i];
    users[i].channel = first_channel[i];
  }
}

Population BuildPopulation(const EnvConfig& config) {
  config.Validate();
  Population pop;
  pop.config = config;
  Rng ad_rng = DeriveRng(config.seed, {1});
  Rng user_rng = DeriveRng(config.seed, {2});
  Rng request_rng = DeriveRng(config.seed, {3});
  pop.ads = SampleAds(config, ad_rng);
  pop.users = SampleUsers(config, user_rng);
  pop.requests = GenerateRequests(pop.users, config, request_rng);
  ApplyRequestCounts(pop.requests, pop.users);
  return pop;
}

}  // namespace msbcb
