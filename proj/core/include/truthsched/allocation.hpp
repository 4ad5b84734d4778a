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

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "truthsched/types.hpp"

namespace truthsched {

/// One machine unit in one time slot.
struct Unit {
  Slot slot = 1;
  int machine = 0;

  friend auto operator<=>(const Unit&, const Unit&) = default;
};

/// Allocation and total payment of a single job. An empty unit list means
/// the job was rejected (or never considered).
struct JobOutcome {
  std::vector<Unit> units;  // ascending by slot
  Value payment = 0.0;

  [[nodiscard]] bool accepted() const { return !units.empty(); }
  [[nodiscard]] Slot first_slot() const { return units.empty() ? 0 : units.front().slot; }
  [[nodiscard]] Slot last_slot() const { return units.empty() ? 0 : units.back().slot; }

  friend bool operator==(const JobOutcome&, const JobOutcome&) = default;
};

class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(Slot slot, const std::string& what);
  [[nodiscard]] Slot slot() const { return slot_; }

 private:
  Slot slot_;
};

/// Per-job outcomes keyed by job id. Jobs absent from the map were rejected
/// with payment 0.
class Allocation {
 public:
  void set(JobId id, JobOutcome outcome);
  void charge(JobId id, Value amount);
  [[nodiscard]] const JobOutcome& outcome(JobId id) const;
  [[nodiscard]] const std::map<JobId, JobOutcome>& outcomes() const { return outcomes_; }
  [[nodiscard]] bool empty() const { return outcomes_.empty(); }

  /// Occupied units per slot, indexed [0, last_slot]; index 0 is unused.
  [[nodiscard]] std::vector<int> occupancy() const;
  [[nodiscard]] int occupancy_at(Slot t) const;
  [[nodiscard]] Slot last_slot() const;

  /// Throws FeasibilityError naming the first slot with more than `machines`
  /// units or a doubly assigned (slot, machine) pair.
  void check_feasible(int machines) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::map<JobId, JobOutcome> outcomes_;
};

/// Per-slot welfare W_t. Index 0 is unused; the series covers at least
/// [1, horizon] and extends past it when non-clairvoyant work runs late.
class WelfareSeries {
 public:
  WelfareSeries() = default;
  explicit WelfareSeries(Slot last) : values_(static_cast<std::size_t>(last + 1), 0.0) {}

  [[nodiscard]] Slot last_slot() const { return static_cast<Slot>(values_.size()) - 1; }
  [[nodiscard]] Value at(Slot t) const;
  void add(Slot t, Value v);
  [[nodiscard]] Value total() const;
  /// Sum over slots in [from, to], clipped to the series.
  [[nodiscard]] Value sum(Slot from, Slot to) const;
  [[nodiscard]] const std::vector<Value>& values() const { return values_; }

  friend bool operator==(const WelfareSeries&, const WelfareSeries&) = default;

 private:
  std::vector<Value> values_{0.0};
};

/// Whether `outcome` meets the job's requirement under `truth`: at least
/// `length` distinct slots inside [arrival, deadline] (clairvoyant), or a
/// start no later than arrival + deadline followed by `length` consecutive
/// slots on one machine (non-clairvoyant).
bool requirement_met(const JobType& truth, Setting setting, const JobOutcome& outcome);

std::set<JobId> served_jobs(const Allocation& alloc, const Instance& inst);
Value total_welfare(const Allocation& alloc, const Instance& inst);
WelfareSeries welfare_series(const Allocation& alloc, const Instance& inst);

/// Utility of a job with type `truth` given what the mechanism did: value
/// times length minus payment when served, otherwise minus payment.
Value utility(const JobType& truth, Setting setting, const JobOutcome& outcome);

}  // namespace truthsched
