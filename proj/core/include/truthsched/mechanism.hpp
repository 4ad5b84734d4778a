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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "truthsched/allocation.hpp"
#include "truthsched/state.hpp"
#include "truthsched/types.hpp"

namespace truthsched {

/// Committed clairvoyant schedule: which (slot, machine) units are taken,
/// plus slots withdrawn from further use. At most 64 machines.
class SlotGrid {
 public:
  static constexpr int kMaxMachines = 64;

  SlotGrid() = default;
  SlotGrid(Slot horizon, int machines);

  [[nodiscard]] Slot horizon() const { return horizon_; }
  [[nodiscard]] int machines() const { return machines_; }
  [[nodiscard]] int used(Slot t) const;
  [[nodiscard]] bool occupied(Slot t, int machine) const;
  [[nodiscard]] bool blocked(Slot t) const;
  /// Units still assignable at t; 0 outside [1, horizon] and on blocked slots.
  [[nodiscard]] int free(Slot t) const;
  /// Takes the lowest free machine at t and returns its index.
  int take(Slot t);
  /// Marks a specific unit as taken; throws if it already is.
  void occupy(const Unit& unit);
  /// Withdraws the remaining free units at t.
  void block(Slot t);
  void encode(StateWriter& out) const;

  friend bool operator==(const SlotGrid&, const SlotGrid&) = default;

 private:
  [[nodiscard]] bool in_range(Slot t) const { return t >= 1 && t <= horizon_; }

  Slot horizon_ = 0;
  int machines_ = 0;
  std::vector<std::uint64_t> taken_;
  std::vector<char> blocked_;
};

/// A prompt mechanism's answer for one job: the units it gets (empty when
/// rejected) and the total payment charged.
struct Decision {
  std::vector<Unit> units;
  Value payment = 0.0;

  [[nodiscard]] bool accepted() const { return !units.empty(); }
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Clairvoyant, prompt mechanism. Each job's decision is emitted when the job
/// arrives and never revised. The runner calls begin_slot(t) for every slot
/// in increasing order, then on_arrival for the jobs arriving at t in
/// arrival order.
class ClairvoyantMechanism {
 public:
  virtual ~ClairvoyantMechanism() = default;

  [[nodiscard]] virtual std::string kind() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
  virtual void reset(const Environment& env) = 0;
  virtual void begin_slot(Slot /*t*/) {}
  virtual Decision on_arrival(const JobType& job) = 0;
  [[nodiscard]] virtual const SlotGrid& committed() const = 0;

  [[nodiscard]] virtual std::unique_ptr<ClairvoyantMechanism> clone() const = 0;
  virtual void restore_from(const ClairvoyantMechanism& other) = 0;
  virtual void encode(StateWriter& out) const = 0;

  [[nodiscard]] StateToken<ClairvoyantMechanism> snapshot() const { return snapshot_of(*this); }
  void restore(const StateToken<ClairvoyantMechanism>& token) { restore_into(*this, token); }
};

/// What a non-clairvoyant mechanism sees of a job: no length.
struct NcReport {
  JobId id = 0;
  Slot arrival = 1;
  Slot wait_budget = 0;  // latest start is arrival + wait_budget
  Value value = 0.0;

  [[nodiscard]] Slot latest_start() const { return arrival + wait_budget; }
  friend bool operator==(const NcReport&, const NcReport&) = default;
};

NcReport to_report(const JobType& job);

struct NcStart {
  JobId id = 0;
  int machine = 0;
};

struct NcCharge {
  JobId id = 0;
  Value amount = 0.0;
};

struct NcEvents {
  std::vector<NcStart> starts;
  std::vector<JobId> rejected;
  std::vector<NcCharge> charges;

  void clear() {
    starts.clear();
    rejected.clear();
    charges.clear();
  }
};

/// Non-clairvoyant, non-preemptive, order-respecting mechanism. step() is
/// called once per slot in increasing order with the jobs whose last unit ran
/// at t-1 and the reports arriving at t (in arrival order). Jobs started
/// during step(t) run from slot t on the returned machine until the runner
/// reports them finished.
class NonClairvoyantMechanism {
 public:
  virtual ~NonClairvoyantMechanism() = default;

  [[nodiscard]] virtual std::string kind() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
  virtual void reset(const Environment& env) = 0;
  virtual void step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
                    NcEvents& out) = 0;
  /// No waiting, buffered or running jobs.
  [[nodiscard]] virtual bool idle() const = 0;

  [[nodiscard]] virtual std::unique_ptr<NonClairvoyantMechanism> clone() const = 0;
  virtual void restore_from(const NonClairvoyantMechanism& other) = 0;
  virtual void encode(StateWriter& out) const = 0;

  [[nodiscard]] StateToken<NonClairvoyantMechanism> snapshot() const { return snapshot_of(*this); }
  void restore(const StateToken<NonClairvoyantMechanism>& token) { restore_into(*this, token); }
};

using ClairvoyantHandle = Handle<ClairvoyantMechanism>;
using NonClairvoyantHandle = Handle<NonClairvoyantMechanism>;

/// Either contract plus descriptor metadata.
class MechanismHandle {
 public:
  MechanismHandle(ClairvoyantHandle h, std::optional<Value> price = std::nullopt);
  MechanismHandle(NonClairvoyantHandle h, std::optional<Value> price = std::nullopt);

  [[nodiscard]] Setting setting() const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] std::optional<Value> price() const { return price_; }
  [[nodiscard]] bool is_clairvoyant() const { return setting() == Setting::clairvoyant; }
  [[nodiscard]] const ClairvoyantHandle& clairvoyant() const;
  [[nodiscard]] const NonClairvoyantHandle& non_clairvoyant() const;
  ClairvoyantHandle& clairvoyant();
  NonClairvoyantHandle& non_clairvoyant();

 private:
  std::variant<ClairvoyantHandle, NonClairvoyantHandle> mech_;
  std::optional<Value> price_;
};

template <class T, class... Args>
Handle<typename T::interface_type> make_handle(Args&&... args) {
  return Handle<typename T::interface_type>(std::make_unique<T>(std::forward<Args>(args)...));
}

}  // namespace truthsched
