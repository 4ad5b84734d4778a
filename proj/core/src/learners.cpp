// Copyright 2026 The truthsched Authors
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

#include "truthsched/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace truthsched {

RewardRangeError::RewardRangeError(double reward, double bound)
    : std::out_of_range("reward " + std::to_string(reward) + " outside [0, " + std::to_string(bound) + "]"),
      reward_(reward) {}

double LazyFpl::default_epsilon(int experts, std::int64_t horizon, double reward_bound,
                                double switching_cost) {
  const double denom = static_cast<double>(std::max<std::int64_t>(horizon, 1)) *
                       std::max(reward_bound + switching_cost, 1e-12);
  const double eps = std::sqrt(std::log(static_cast<double>(std::max(experts, 2))) / denom);
  return std::clamp(eps, 1e-12, 1.0);
}

LazyFpl::LazyFpl(int experts, const LazyFplConfig& cfg)
    : reward_bound_(cfg.reward_bound),
      epsilon_(cfg.epsilon.value_or(default_epsilon(experts, cfg.horizon, cfg.reward_bound, cfg.switching_cost))),
      rng_(cfg.seed),
      cumulative_(static_cast<std::size_t>(experts), 0.0) {
  if (experts < 1) throw std::invalid_argument("need at least one expert");
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("perturbation rate must be positive");
  score_.reserve(cumulative_.size());
  for (int i = 0; i < experts; ++i) score_.push_back(exponential(rng_, epsilon_));
  recompute_choice();
}

void LazyFpl::recompute_choice() {
  choice_ = static_cast<int>(std::max_element(score_.begin(), score_.end()) - score_.begin());
}

void LazyFpl::feed(std::span<const double> rewards) {
  if (rewards.size() != cumulative_.size()) throw std::invalid_argument("reward vector has the wrong length");
  for (double r : rewards) {
    if (!(r >= 0.0) || r > reward_bound_ + 1e-9) throw RewardRangeError(r, reward_bound_);
  }
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    cumulative_[i] += rewards[i];
    if (score_[i] < cumulative_[i]) score_[i] = cumulative_[i] + exponential(rng_, epsilon_);
  }
  const int before = choice_;
  recompute_choice();
  if (choice_ != before) ++switches_;
}

double Exp3::default_exploration(int arms, std::int64_t horizon) {
  const double n = arms;
  const double g = std::sqrt(n * std::log(n) / ((std::numbers::e - 1.0) *
                                                static_cast<double>(std::max<std::int64_t>(horizon, 1))));
  return std::min(1.0, g);
}

Exp3::Exp3(int arms, const Exp3Config& cfg)
    : reward_bound_(cfg.reward_bound),
      exploration_(cfg.exploration.value_or(default_exploration(arms, cfg.horizon))),
      rate_(cfg.rate.value_or(exploration_ / std::max(arms, 1))),
      rng_(cfg.seed),
      log_weights_(static_cast<std::size_t>(arms), 0.0) {
  if (arms < 1) throw std::invalid_argument("need at least one arm");
  if (!(reward_bound_ > 0.0)) throw std::invalid_argument("reward bound must be positive");
  if (!(exploration_ >= 0.0 && exploration_ <= 1.0)) throw std::invalid_argument("exploration must lie in [0, 1]");
}

std::vector<double> Exp3::probabilities() const {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> p(log_weights_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p[i] = std::exp(log_weights_[i] - top);
  const double n = static_cast<double>(p.size());
  for (double& x : p) x = (1.0 - exploration_) * x / total + exploration_ / n;
  return p;
}

int Exp3::choose() {
  const auto p = probabilities();
  const double u = uniform01(rng_);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

void Exp3::feed(int arm, double reward) {
  if (arm < 0 || arm >= arms()) throw std::invalid_argument("arm index out of range");
  if (!(reward >= 0.0) || reward > reward_bound_ + 1e-9) throw RewardRangeError(reward, reward_bound_);
  if (reward == 0.0) return;
  const double p = probabilities()[static_cast<std::size_t>(arm)];
  log_weights_[static_cast<std::size_t>(arm)] += rate_ * reward / (p * reward_bound_);
  // Keep the largest log-weight at 0 so differences never overflow.
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& w : log_weights_) w -= top;
}

DoublingExp3 make_doubling_exp3(int arms, std::uint64_t seed) {
  return DoublingExp3(
      [arms](double r, std::int64_t t, std::uint64_t s) {
        return Exp3(arms, Exp3Config{r, t, std::nullopt, std::nullopt, s});
      },
      seed);
}

double harmonic_number(int k) {
  double h = 0.0;
  for (int i = 1; i <= k; ++i) h += 1.0 / i;
  return h;
}

GeometricMaxResult geometric_max_check(int k, double gamma, std::int64_t samples, std::uint64_t seed) {
  if (k < 1 || !(gamma > 0.0 && gamma <= 1.0) || samples < 1) {
    throw std::invalid_argument("geometric max check needs k >= 1, gamma in (0, 1], samples >= 1");
  }
  Rng rng(seed);
  const double log_q = std::log1p(-gamma);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double best = 1.0;
    if (gamma < 1.0) {
      for (int i = 0; i < k; ++i) {
        best = std::max(best, std::ceil(std::log(uniform01(rng)) / log_q));
      }
    }
    sum += best;
    sum_sq += best * best;
  }
  const double n = static_cast<double>(samples);
  GeometricMaxResult r;
  r.mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - n * r.mean * r.mean) / (n - 1.0)) : 0.0;
  r.standard_error = std::sqrt(var / n);
  r.bound = harmonic_number(k) / gamma;
  return r;
}

}  // namespace truthsched
