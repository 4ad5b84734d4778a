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

#include "truthsched/mechanism.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

namespace truthsched {

SlotGrid::SlotGrid(Slot horizon, int machines)
    : horizon_(horizon),
      machines_(machines),
      taken_(static_cast<std::size_t>(std::max<Slot>(horizon, 0) + 1), 0),
      blocked_(static_cast<std::size_t>(std::max<Slot>(horizon, 0) + 1), 0) {
  if (machines < 1 || machines > kMaxMachines) {
    throw std::invalid_argument("machine count must be in [1, 64]");
  }
}

int SlotGrid::used(Slot t) const {
  if (!in_range(t)) return 0;
  return std::popcount(taken_[static_cast<std::size_t>(t)]);
}

bool SlotGrid::occupied(Slot t, int machine) const {
  if (!in_range(t) || machine < 0 || machine >= machines_) return false;
  return ((taken_[static_cast<std::size_t>(t)] >> machine) & 1U) != 0;
}

bool SlotGrid::blocked(Slot t) const {
  if (!in_range(t)) return true;
  return blocked_[static_cast<std::size_t>(t)] != 0;
}

int SlotGrid::free(Slot t) const {
  if (!in_range(t) || blocked(t)) return 0;
  return machines_ - used(t);
}

int SlotGrid::take(Slot t) {
  if (free(t) <= 0) throw FeasibilityError(t, "no free unit to take");
  const auto mask = taken_[static_cast<std::size_t>(t)];
  const int machine = std::countr_one(mask);
  taken_[static_cast<std::size_t>(t)] = mask | (std::uint64_t{1} << machine);
  return machine;
}

void SlotGrid::occupy(const Unit& unit) {
  if (!in_range(unit.slot)) throw FeasibilityError(unit.slot, "slot outside the horizon");
  if (unit.machine < 0 || unit.machine >= machines_) {
    throw FeasibilityError(unit.slot, "machine index " + std::to_string(unit.machine) + " out of range");
  }
  if (occupied(unit.slot, unit.machine)) {
    throw FeasibilityError(unit.slot, "machine " + std::to_string(unit.machine) + " assigned twice");
  }
  taken_[static_cast<std::size_t>(unit.slot)] |= std::uint64_t{1} << unit.machine;
}

void SlotGrid::block(Slot t) {
  if (in_range(t)) blocked_[static_cast<std::size_t>(t)] = 1;
}

void SlotGrid::encode(StateWriter& out) const {
  out.put(horizon_);
  out.put(machines_);
  for (Slot t = 1; t <= horizon_; ++t) {
    out.put(static_cast<std::int64_t>(taken_[static_cast<std::size_t>(t)]));
    out.put(blocked_[static_cast<std::size_t>(t)] != 0);
  }
}

NcReport to_report(const JobType& job) { return NcReport{job.id, job.arrival, job.deadline, job.value}; }

MechanismHandle::MechanismHandle(ClairvoyantHandle h, std::optional<Value> price)
    : mech_(std::move(h)), price_(price) {}

MechanismHandle::MechanismHandle(NonClairvoyantHandle h, std::optional<Value> price)
    : mech_(std::move(h)), price_(price) {}

Setting MechanismHandle::setting() const {
  return std::holds_alternative<ClairvoyantHandle>(mech_) ? Setting::clairvoyant
                                                          : Setting::non_clairvoyant;
}

std::string MechanismHandle::name() const {
  return std::visit([](const auto& h) { return h->name(); }, mech_);
}

const ClairvoyantHandle& MechanismHandle::clairvoyant() const {
  if (const auto* h = std::get_if<ClairvoyantHandle>(&mech_)) return *h;
  throw std::logic_error(name() + " is not a clairvoyant mechanism");
}

const NonClairvoyantHandle& MechanismHandle::non_clairvoyant() const {
  if (const auto* h = std::get_if<NonClairvoyantHandle>(&mech_)) return *h;
  throw std::logic_error(name() + " is not a non-clairvoyant mechanism");
}

ClairvoyantHandle& MechanismHandle::clairvoyant() {
  return const_cast<ClairvoyantHandle&>(std::as_const(*this).clairvoyant());
}

NonClairvoyantHandle& MechanismHandle::non_clairvoyant() {
  return const_cast<NonClairvoyantHandle&>(std::as_const(*this).non_clairvoyant());
}

}  // namespace truthsched
