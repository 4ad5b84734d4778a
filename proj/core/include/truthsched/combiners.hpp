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

#include <functional>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "truthsched/learners.hpp"
#include "truthsched/mechanism.hpp"
#include "truthsched/runner.hpp"
#include "truthsched/switching.hpp"

namespace truthsched {

struct BatchRecord {
  Slot from = 0;  // previous heads slot t'
  Slot to = 0;    // last slot of the batch, t - 1
  int arm = 0;
  double reward = 0.0;
};

/// What a combiner did, slot by slot.
struct RunLog {
  std::vector<int> choices;  // choices[t - 1] = index in use at slot t
  std::vector<Slot> switch_slots;
  std::vector<Slot> restart_slots;
  std::vector<Slot> heads;                   // slots whose coin came up heads
  std::vector<std::vector<double>> rewards;  // rewards[t - 1] = vector fed at slot t (FTS)
  std::vector<BatchRecord> batches;          // FTBS
  std::vector<WelfareSeries> member_welfare; // FTS: each roster member on the full stream
  WelfareSeries own_welfare;                 // FTBS: W_x observed at the end of step(x)
};

struct FtsConfig {
  std::optional<double> switching_cost;  // default 2 v_max d_max m
  std::optional<double> epsilon;         // default from LazyFpl
  std::uint64_t seed = 0;
};

/// Follow the switching leader for prompt clairvoyant rosters. Every roster
/// member is simulated on the full stream. At the start of slot t the
/// experts learner receives r_i = W_{t-1}(A_i) for every i and names i_t;
/// when i_t changes, the schedule continues through a clairvoyant switch from
/// the schedule so far to A_{i_t} at t.
class Fts final : public Cloneable<Fts, ClairvoyantMechanism> {
 public:
  Fts(std::vector<ClairvoyantHandle> roster, FtsConfig cfg);

  [[nodiscard]] std::string kind() const override { return "fts"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  void begin_slot(Slot t) override;
  Decision on_arrival(const JobType& job) override;
  [[nodiscard]] const SlotGrid& committed() const override { return chain_->committed(); }
  void encode(StateWriter& out) const override;

  [[nodiscard]] const RunLog& log() const { return log_; }
  [[nodiscard]] double switching_cost() const { return switching_cost_; }
  [[nodiscard]] const LazyFpl& learner() const { return *learner_; }

 private:
  std::vector<ClairvoyantHandle> roster_;
  FtsConfig cfg_;
  Environment env_;
  double switching_cost_ = 0.0;
  std::vector<ClairvoyantHandle> sims_;
  std::optional<LazyFpl> learner_;
  ClairvoyantHandle chain_;
  int current_ = 0;
  RunLog log_;
};

/// Per-slot bandit rewards of one FTBS batch and their total.
struct BatchRewards {
  std::vector<double> per_slot;  // per_slot[x - t'] for x in [t', t - 1]
  double total = 0.0;
};

/// Zero on [t', min(t' + w, t - 1)], the combiner's own W_x afterwards.
BatchRewards batch_rewards(const WelfareSeries& welfare, Slot t_prev, Slot t, Slot w);

/// Coin policy for FTBS: heads at slot t? It sees the reports arriving at t
/// only so that a deliberately broken, report-dependent policy can be built.
using CoinPolicy = std::function<bool(Slot, std::span<const NcReport>)>;

struct FtbsConfig {
  std::optional<double> gamma;  // default from ftbs_default_gamma
  std::uint64_t seed = 0;
  CoinPolicy coin_override;     // replaces the seeded coins when set
};

double ftbs_default_gamma(const Environment& env, int arms);

/// Follow the bandit switching leader for non-clairvoyant rosters. Each slot
/// t <= T flips a coin. On heads, the batch since the previous heads t' is
/// scored with batch_rewards and credited to the arm that was active, the
/// bandit names the next arm, and a resynchronisation window opens at t
/// targeting a fresh copy of it: a switch if the arm changed, a restart if
/// not.
class Ftbs final : public Cloneable<Ftbs, NonClairvoyantMechanism> {
 public:
  Ftbs(std::vector<NonClairvoyantHandle> roster, FtbsConfig cfg);

  [[nodiscard]] std::string kind() const override { return "ftbs"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  void step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
            NcEvents& out) override;
  [[nodiscard]] bool idle() const override { return core_ && core_->idle(); }
  void encode(StateWriter& out) const override;

  [[nodiscard]] const RunLog& log() const { return log_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] const ResyncMechanism& core() const { return *core_; }
  [[nodiscard]] const DoublingExp3& bandit() const { return *bandit_; }

 private:
  std::vector<NonClairvoyantHandle> roster_;
  FtbsConfig cfg_;
  Environment env_;
  double gamma_ = 0.0;
  CoinSource coins_;
  std::optional<DoublingExp3> bandit_;
  std::optional<ResyncMechanism> core_;
  int arm_ = 0;
  Slot last_heads_ = 1;
  std::unordered_map<JobId, Value> reported_value_;
  std::unordered_map<JobId, Value> running_;
  RunLog log_;
};

struct MemberEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct BenchmarkEstimate {
  std::vector<MemberEstimate> members;
  double opt_bar = 0.0;
  int best = 0;
};

/// Monte Carlo estimate of E[W(A_i with random restarts at rate gamma)] for
/// every roster member, over independent coin seeds, and their maximum.
BenchmarkEstimate restart_benchmark(const std::vector<NonClairvoyantHandle>& roster, double gamma,
                                    const Instance& inst, int samples, std::uint64_t seed);

}  // namespace truthsched
