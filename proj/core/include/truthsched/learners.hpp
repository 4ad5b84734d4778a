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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "truthsched/rng.hpp"

namespace truthsched {

/// A reward outside the range the learner was configured for.
class RewardRangeError : public std::out_of_range {
 public:
  RewardRangeError(double reward, double bound);
  [[nodiscard]] double reward() const { return reward_; }

 private:
  double reward_;
};

struct LazyFplConfig {
  std::int64_t horizon = 1;      // T
  double reward_bound = 1.0;     // R: per-step rewards lie in [0, R]
  double switching_cost = 0.0;   // C
  std::optional<double> epsilon; // perturbation rate; default sqrt(ln n / (T (R + C))) clipped to (0, 1]
  std::uint64_t seed = 0;
};

/// Experts with a switching cost: follow the lazy perturbed leader.
///
/// Expert i's score is its cumulative reward plus an Exp(epsilon) head start.
/// The choice is the highest score (lowest index on ties). After rewards are
/// added, only experts whose cumulative reward overtook their score draw a new
/// head start above it; by memorylessness every score stays distributed as
/// cumulative reward plus Exp(epsilon), while the leader changes rarely.
class LazyFpl {
 public:
  LazyFpl(int experts, const LazyFplConfig& cfg);

  [[nodiscard]] int choose() const { return choice_; }
  void feed(std::span<const double> rewards);

  [[nodiscard]] int experts() const { return static_cast<int>(cumulative_.size()); }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] std::int64_t switches() const { return switches_; }
  [[nodiscard]] const std::vector<double>& cumulative() const { return cumulative_; }

  static double default_epsilon(int experts, std::int64_t horizon, double reward_bound, double switching_cost);

 private:
  void recompute_choice();

  double reward_bound_;
  double epsilon_;
  Rng rng_;
  std::vector<double> cumulative_;
  std::vector<double> score_;
  int choice_ = 0;
  std::int64_t switches_ = 0;
};

struct Exp3Config {
  double reward_bound = 1.0;          // R
  std::int64_t horizon = 1;           // T
  std::optional<double> exploration;  // default min(1, sqrt(n ln n / ((e - 1) T)))
  std::optional<double> rate;         // eta; default exploration / n
  std::uint64_t seed = 0;
};

/// Adversarial bandit with exponential weights and importance weighting.
/// Weights are kept as logarithms.
class Exp3 {
 public:
  Exp3(int arms, const Exp3Config& cfg);

  /// Samples an arm from probabilities().
  int choose();
  /// Reward observed on `arm`, in [0, R].
  void feed(int arm, double reward);

  [[nodiscard]] int arms() const { return static_cast<int>(log_weights_.size()); }
  [[nodiscard]] std::vector<double> probabilities() const;
  [[nodiscard]] const std::vector<double>& log_weights() const { return log_weights_; }
  [[nodiscard]] double exploration() const { return exploration_; }
  [[nodiscard]] double rate() const { return rate_; }
  [[nodiscard]] double reward_bound() const { return reward_bound_; }

  static double default_exploration(int arms, std::int64_t horizon);

 private:
  double reward_bound_;
  double exploration_;
  double rate_;
  Rng rng_;
  std::vector<double> log_weights_;
};

/// Runs a bandit learner without knowing the reward bound R or horizon T.
/// Both guesses start at 1. A reward above the R guess doubles it (as often
/// as needed) and restarts the inner learner, dropping that observation;
/// after T guess observations the T guess doubles and the learner restarts.
template <class Inner>
class DoublingBandit {
 public:
  using Factory = std::function<Inner(double reward_bound, std::int64_t horizon, std::uint64_t seed)>;

  DoublingBandit(Factory factory, std::uint64_t seed)
      : factory_(std::move(factory)), seed_(seed), inner_(make()) {}

  int choose() {
    if (steps_ >= t_guess_) {
      t_guess_ *= 2;
      ++t_doublings_;
      restart();
    }
    return inner_.choose();
  }

  void feed(int arm, double reward) {
    if (reward > r_guess_) {
      while (reward > r_guess_) {
        r_guess_ *= 2.0;
        ++r_doublings_;
      }
      restart();
      return;
    }
    inner_.feed(arm, reward);
    ++steps_;
  }

  [[nodiscard]] double r_guess() const { return r_guess_; }
  [[nodiscard]] std::int64_t t_guess() const { return t_guess_; }
  [[nodiscard]] int r_doublings() const { return r_doublings_; }
  [[nodiscard]] int t_doublings() const { return t_doublings_; }
  [[nodiscard]] const Inner& inner() const { return inner_; }

 private:
  Inner make() { return factory_(r_guess_, t_guess_, derive_seed(seed_, epoch_)); }
  void restart() {
    ++epoch_;
    steps_ = 0;
    inner_ = make();
  }

  Factory factory_;
  std::uint64_t seed_;
  double r_guess_ = 1.0;
  std::int64_t t_guess_ = 1;
  std::int64_t steps_ = 0;
  std::uint64_t epoch_ = 0;
  int r_doublings_ = 0;
  int t_doublings_ = 0;
  Inner inner_;
};

using DoublingExp3 = DoublingBandit<Exp3>;

/// EXP3 with default parameters for the guessed (R, T).
DoublingExp3 make_doubling_exp3(int arms, std::uint64_t seed);

struct GeometricMaxResult {
  double mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;  // H_k / gamma
};

/// Monte Carlo estimate of E[max of k i.i.d. Geometric(gamma)] on {1, 2, ...}
/// next to the harmonic bound H_k / gamma.
GeometricMaxResult geometric_max_check(int k, double gamma, std::int64_t samples, std::uint64_t seed);

double harmonic_number(int k);

}  // namespace truthsched
