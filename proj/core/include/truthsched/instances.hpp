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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "truthsched/types.hpp"

namespace truthsched {

/// Per-round losses of the two actions, each in [0, 1].
struct LossPair {
  double first = 0.0;
  double second = 0.0;

  friend bool operator==(const LossPair&, const LossPair&) = default;
};
using LossSequence = std::vector<LossPair>;

void validate_losses(const LossSequence& losses);

/// A discrete distribution: (outcome, weight) pairs with non-negative weights.
template <class T>
using Weighted = std::vector<std::pair<T, double>>;

struct StochasticSpec {
  Slot horizon = 100;
  int machines = 1;
  Bounds bounds;
  Setting setting = Setting::non_clairvoyant;
  double arrival_rate = 1.0;  // Poisson mean of arrivals per slot
  Weighted<Value> values{{1.0, 1.0}};
  Weighted<Slot> lengths{{1, 1.0}};
  /// Clairvoyant: extra slots beyond arrival + length - 1 before the
  /// deadline (capped by d_max and T). Non-clairvoyant: the wait budget.
  Weighted<Slot> slack{{0, 1.0}};
};

/// Throws std::invalid_argument naming the first problem with the spec.
void validate_spec(const StochasticSpec& spec);

/// Independent draws every slot: a Poisson number of arrivals, each with
/// value, length and slack drawn from the given distributions.
Instance gen_stochastic(const StochasticSpec& spec, std::uint64_t seed);

/// Clairvoyant lower-bound instance with `rounds` two-slot rounds (T = 2
/// rounds, m = 1). Round i starts at t = 2i + 1 with a value-1 job for slot t
/// and a value-2 job for slot t or t + 1; with probability 1/2 a value-2 job
/// for slot t + 1 follows at t + 1. All lengths are 1.
Instance gen_clairvoyant_lb(std::int64_t rounds, std::uint64_t seed);

/// Length outcomes of one round of the non-clairvoyant lower-bound instance.
struct NcLbRound {
  bool long_first = false;  // the value-1 job runs 8 slots (else 6)
  bool long_third = false;  // the value-2 job runs 4 slots (else 2)
};

/// Probability that round i's value-1 job runs 8 slots: 1/2 + l1 / 2.
double nc_lb_long_first_probability(const LossPair& loss);
/// Probability that round i's value-2 job runs 4 slots: l2.
double nc_lb_long_third_probability(const LossPair& loss);

/// Which of the four job sets a job of the non-clairvoyant lower-bound
/// instance belongs to (0..3) and its round.
constexpr int nc_lb_job_set(JobId id) { return static_cast<int>(id % 4); }
constexpr std::int64_t nc_lb_round(JobId id) { return id / 4; }

/// Non-clairvoyant lower-bound instance with the given length outcomes,
/// eight slots per round, m = 1 and zero wait budgets. In round i (from 0):
/// set 0 (value 1, length 6 or 8) arrives at 8i + 1, set 1 (value 3, length 2)
/// at 8i + 7, and for i >= 1 set 2 (value 2, length 2 or 4) at 8i - 2 and
/// set 3 (value 3, length 2) at 8i. Job ids are 4i + set.
Instance nc_lb_instance(const std::vector<NcLbRound>& rounds);

/// Draws each round's lengths from the losses.
Instance gen_nc_lb(const LossSequence& losses, std::uint64_t seed);

/// Three unit-value jobs with immediate deadlines: (a, l) = (1, 3), (3, 3),
/// (4, T - 4). Needs T >= 5.
Instance gen_syncing_example(Slot horizon, Setting setting = Setting::clairvoyant);

struct RandomInstanceParams {
  Slot max_horizon = 20;
  int max_machines = 2;
  int max_jobs = 6;
  Value v_max = 4.0;
  Slot d_max = 4;
  Slot l_max = 3;
  int value_levels = 4;  // values drawn from {0, v_max/levels, ..., v_max}
  Setting setting = Setting::clairvoyant;
};

/// A small random instance for exhaustive checks.
Instance random_instance(const RandomInstanceParams& params, std::uint64_t seed);

/// The desk-scale corpus: `count` instances with T <= 20 and at most 6 jobs.
std::vector<Instance> desk_corpus(Setting setting, int count, std::uint64_t seed);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::int64_t line, const std::string& what);
  [[nodiscard]] std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// Line-delimited JSON: a header {"T","m","v_max","d_max","l_max","setting"}
/// followed by one {"id","a","d","l","v"} record per job.
void write_instance(const Instance& inst, std::ostream& out);
void write_instance(const Instance& inst, const std::filesystem::path& path);
/// Throws ParseError for malformed input and ValidationError for instances
/// that break their bounds.
Instance read_instance(std::istream& in);
Instance read_instance(const std::filesystem::path& path);

/// One "l1 l2" pair per line; blank lines and lines starting with '#' are
/// skipped.
LossSequence read_losses(std::istream& in);
LossSequence read_losses(const std::filesystem::path& path);

}  // namespace truthsched
