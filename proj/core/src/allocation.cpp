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

#include "truthsched/allocation.hpp"

#include <algorithm>
#include <numeric>

namespace truthsched {

FeasibilityError::FeasibilityError(Slot slot, const std::string& what)
    : std::runtime_error("infeasible allocation at slot " + std::to_string(slot) + ": " + what),
      slot_(slot) {}

void Allocation::set(JobId id, JobOutcome outcome) {
  std::sort(outcome.units.begin(), outcome.units.end());
  outcomes_[id] = std::move(outcome);
}

void Allocation::charge(JobId id, Value amount) { outcomes_[id].payment += amount; }

const JobOutcome& Allocation::outcome(JobId id) const {
  static const JobOutcome kRejected{};
  auto it = outcomes_.find(id);
  return it == outcomes_.end() ? kRejected : it->second;
}

Slot Allocation::last_slot() const {
  Slot last = 0;
  for (const auto& [id, o] : outcomes_) last = std::max(last, o.last_slot());
  return last;
}

std::vector<int> Allocation::occupancy() const {
  std::vector<int> occ(static_cast<std::size_t>(last_slot() + 1), 0);
  for (const auto& [id, o] : outcomes_) {
    for (const Unit& u : o.units) {
      if (u.slot >= 1) ++occ[static_cast<std::size_t>(u.slot)];
    }
  }
  return occ;
}

int Allocation::occupancy_at(Slot t) const {
  int n = 0;
  for (const auto& [id, o] : outcomes_) {
    n += static_cast<int>(std::count_if(o.units.begin(), o.units.end(),
                                        [t](const Unit& u) { return u.slot == t; }));
  }
  return n;
}

void Allocation::check_feasible(int machines) const {
  std::vector<Unit> units;
  for (const auto& [id, o] : outcomes_) {
    for (const Unit& u : o.units) {
      if (u.slot < 1) throw FeasibilityError(u.slot, "slot before 1");
      if (u.machine < 0 || u.machine >= machines) {
        throw FeasibilityError(u.slot, "machine index " + std::to_string(u.machine) + " out of range");
      }
      units.push_back(u);
    }
  }
  std::sort(units.begin(), units.end());
  const auto dup = std::adjacent_find(units.begin(), units.end());
  if (dup != units.end()) {
    throw FeasibilityError(dup->slot, "machine " + std::to_string(dup->machine) + " assigned twice");
  }
  // With every machine index in range and no unit used twice, no slot can
  // hold more than `machines` units.
}

Value WelfareSeries::at(Slot t) const {
  if (t < 1 || t > last_slot()) return 0.0;
  return values_[static_cast<std::size_t>(t)];
}

void WelfareSeries::add(Slot t, Value v) {
  if (t < 1) return;
  if (t > last_slot()) values_.resize(static_cast<std::size_t>(t + 1), 0.0);
  values_[static_cast<std::size_t>(t)] += v;
}

Value WelfareSeries::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Value WelfareSeries::sum(Slot from, Slot to) const {
  from = std::max<Slot>(from, 1);
  to = std::min(to, last_slot());
  Value s = 0.0;
  for (Slot t = from; t <= to; ++t) s += values_[static_cast<std::size_t>(t)];
  return s;
}

bool requirement_met(const JobType& truth, Setting setting, const JobOutcome& outcome) {
  const auto& units = outcome.units;
  if (units.empty()) return false;
  if (setting == Setting::clairvoyant) {
    std::set<Slot> inside;
    for (const Unit& u : units) {
      if (u.slot >= truth.arrival && u.slot <= truth.deadline) inside.insert(u.slot);
    }
    return static_cast<Slot>(inside.size()) >= truth.length;
  }
  const Slot start = units.front().slot;
  if (start < truth.arrival || start > truth.arrival + truth.deadline) return false;
  if (static_cast<Slot>(units.size()) < truth.length) return false;
  for (std::size_t k = 1; k < units.size(); ++k) {
    if (units[k].slot != units[k - 1].slot + 1 || units[k].machine != units[0].machine) return false;
  }
  return true;
}

std::set<JobId> served_jobs(const Allocation& alloc, const Instance& inst) {
  alloc.check_feasible(inst.machines);
  std::set<JobId> out;
  for (const JobType& j : inst.jobs) {
    if (requirement_met(j, inst.setting, alloc.outcome(j.id))) out.insert(j.id);
  }
  return out;
}

WelfareSeries welfare_series(const Allocation& alloc, const Instance& inst) {
  const auto served = served_jobs(alloc, inst);
  WelfareSeries series(std::max(inst.horizon, alloc.last_slot()));
  for (const JobType& j : inst.jobs) {
    if (!served.contains(j.id)) continue;
    for (const Unit& u : alloc.outcome(j.id).units) series.add(u.slot, j.value);
  }
  return series;
}

Value total_welfare(const Allocation& alloc, const Instance& inst) {
  const auto served = served_jobs(alloc, inst);
  Value total = 0.0;
  for (const JobType& j : inst.jobs) {
    if (served.contains(j.id)) total += j.value * static_cast<Value>(j.length);
  }
  return total;
}

Value utility(const JobType& truth, Setting setting, const JobOutcome& outcome) {
  if (requirement_met(truth, setting, outcome)) {
    return truth.value * static_cast<Value>(truth.length) - outcome.payment;
  }
  return -outcome.payment;
}

}  // namespace truthsched
