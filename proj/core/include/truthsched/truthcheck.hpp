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
#include <string>
#include <vector>

#include "truthsched/combiners.hpp"
#include "truthsched/mechanism.hpp"
#include "truthsched/ppf.hpp"
#include "truthsched/runner.hpp"

namespace truthsched {

/// Builds a fresh mechanism for one fixed coin seed. Deterministic
/// mechanisms ignore the seed.
using MechanismFactory = std::function<MechanismHandle(std::uint64_t seed)>;

/// Candidate misreports for one job. Arrivals are never earlier than the
/// truth. Lengths are only varied in the clairvoyant setting.
struct MisreportGrid {
  Slot max_arrival_delay = 2;
  int value_points = 5;  // evenly spaced over [0, v_max]
  bool vary_deadline = true;
  bool vary_length = true;
};

/// Every report the grid allows for `truth` within the instance bounds
/// (the truth itself excluded).
std::vector<JobType> misreports(const JobType& truth, const Instance& inst, const MisreportGrid& grid);

struct Violation {
  std::string check;  // "truthful" or "order-respecting"
  Instance instance;
  JobId job = 0;
  JobType truth;
  JobType report;  // truthful: the lie; order-respecting: the altered later job
  bool deleted = false;  // order-respecting: the later job was removed
  double utility_truth = 0.0;
  double utility_lie = 0.0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct CheckReport {
  std::vector<Violation> violations;
  std::int64_t reruns = 0;
  bool partial = false;  // stopped at the rerun budget

  void merge(CheckReport other);
};

struct CheckOptions {
  MisreportGrid grid;
  std::vector<std::uint64_t> seeds{0};
  std::int64_t budget = 1'000'000;  // reruns
};

/// For every job, grid misreport and seed: rerun with only that job's report
/// changed and compare its utility, measured against its true type, with the
/// truthful run. Reports every improvement beyond the value tolerance.
CheckReport check_truthful(const MechanismFactory& factory, const Instance& inst, const CheckOptions& opts);

/// For every job j and every strictly later job k: delete k, or change its
/// value, length, deadline or arrival (later only), and rerun. j's units and
/// payment must not change.
CheckReport check_order_respecting(const MechanismFactory& factory, const Instance& inst,
                                   const CheckOptions& opts);

/// Recomputes a truthfulness violation and confirms the recorded utilities
/// bit for bit.
bool replay_violation(const MechanismFactory& factory, const Violation& v);

/// Coin flips and window openings of a randomized combiner run.
struct CoinTrace {
  std::vector<Slot> heads;
  std::vector<Slot> window_starts;

  friend bool operator==(const CoinTrace&, const CoinTrace&) = default;
};

CoinTrace coin_trace(const Ftbs& ftbs);
CoinTrace coin_trace(const ResyncMechanism& resync);

/// Empty when the two traces agree; otherwise names the first difference.
std::string check_restart_report_independence(const CoinTrace& original, const CoinTrace& altered);

// Deliberately broken controls the checker must catch.

/// Admits every job at the earliest free slots and charges its reported
/// value per unit, so underbidding pays.
class FirstPriceClairvoyant final : public Cloneable<FirstPriceClairvoyant, ClairvoyantMechanism> {
 public:
  [[nodiscard]] std::string kind() const override { return "first-price"; }
  [[nodiscard]] std::string name() const override { return "first-price"; }
  void reset(const Environment& env) override { inner_.reset(env); }
  Decision on_arrival(const JobType& job) override;
  [[nodiscard]] const SlotGrid& committed() const override { return inner_.committed(); }
  void encode(StateWriter& out) const override { inner_.encode(out); }

 private:
  PpfClairvoyant inner_{0.0};
};

/// Posted-price FIFO whose completion charge grows with every job that
/// arrived while the charged job was running, so later arrivals change
/// earlier jobs' payments.
class RepricingNonClairvoyant final : public Cloneable<RepricingNonClairvoyant, NonClairvoyantMechanism> {
 public:
  explicit RepricingNonClairvoyant(Value price) : inner_(price), price_(price) {}
  [[nodiscard]] std::string kind() const override { return "repricing"; }
  [[nodiscard]] std::string name() const override { return "repricing:" + format_price(price_); }
  void reset(const Environment& env) override;
  void step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
            NcEvents& out) override;
  [[nodiscard]] bool idle() const override { return inner_.idle(); }
  void encode(StateWriter& out) const override;

 private:
  PpfNonClairvoyant inner_;
  Value price_;
  std::int64_t arrivals_seen_ = 0;
  std::vector<std::pair<JobId, std::int64_t>> started_at_count_;
};

/// An FTBS variant whose coins hash the reports arriving in each slot.
CoinPolicy report_hash_coins(double gamma, std::uint64_t seed);

}  // namespace truthsched
