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

#include <map>
#include <optional>
#include <vector>

#include "truthsched/mechanism.hpp"
#include "truthsched/rng.hpp"

namespace truthsched {

/// One slot of the target schedule that was taken when the switched
/// mechanism got to it, and the slot used instead.
struct Replacement {
  JobId job = 0;
  Slot replaced = 0;
  Slot replacement = 0;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct SwitchAudit {
  std::vector<Replacement> replacements;
};

/// Switch from A to B at slot s for prompt clairvoyant mechanisms.
///
/// Jobs arriving before s get A's decision unchanged. At s the free units of
/// [s, s + d_max - 1] are withdrawn. A later job whose deadline falls inside
/// that window is declined at price 0. Every other later job is put to B,
/// which sees the full job stream: declined if B declines or if the job's
/// window has fewer available slots than B grants; otherwise it keeps B's
/// slots that are still available, takes the earliest available slots of its
/// window in place of the others, and pays what B charges.
class SwitchClairvoyant final : public Cloneable<SwitchClairvoyant, ClairvoyantMechanism> {
 public:
  /// Both mechanisms are reset with the environment on reset().
  SwitchClairvoyant(ClairvoyantHandle a, ClairvoyantHandle b, Slot s);

  /// Splices a switch into a run in progress: `a` and `b` are live mechanisms
  /// that have processed every slot before s under `env`. No reset follows.
  static SwitchClairvoyant splice(ClairvoyantHandle a, ClairvoyantHandle b, Slot s, const Environment& env);

  [[nodiscard]] std::string kind() const override { return "switch-clairvoyant"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  void begin_slot(Slot t) override;
  Decision on_arrival(const JobType& job) override;
  [[nodiscard]] const SlotGrid& committed() const override;
  void encode(StateWriter& out) const override;

  [[nodiscard]] Slot switch_slot() const { return s_; }
  /// Replacements made by this switch and, for chains, by every earlier one.
  [[nodiscard]] const SwitchAudit& audit() const { return audit_; }
  /// The target mechanism's own simulation on the full stream.
  [[nodiscard]] const ClairvoyantMechanism& target() const { return *b_; }

 private:
  void release_source();

  ClairvoyantHandle a_proto_;
  ClairvoyantHandle b_proto_;
  ClairvoyantHandle a_;
  ClairvoyantHandle b_;
  Slot s_;
  Environment env_;
  SlotGrid grid_;
  SwitchAudit audit_;
};

ClairvoyantHandle switch_clairvoyant(ClairvoyantHandle a, ClairvoyantHandle b, Slot s);

/// A roster A_0..A_L with switch slots t_1 < ... < t_L.
struct SwitchPlan {
  std::vector<ClairvoyantHandle> roster;
  std::vector<Slot> switch_slots;
};

/// Left fold of switch_clairvoyant over the plan.
ClairvoyantHandle compose_chain(const SwitchPlan& plan);

struct FreeSlotAudit {
  std::optional<Slot> first_free;   // t*
  std::int64_t total = 0;           // sum of free(t)
  std::map<Slot, int> support;      // slots with free(t) > 0
};

/// Free slots of a switch at s: from s + d_max on, the number of units the
/// target schedule uses at t beyond those the switched schedule uses,
/// max(0, l_B(t) - l_C(t)).
FreeSlotAudit audit_free_slots(const Allocation& c_alloc, const Allocation& b_alloc, Slot s, Slot d_max,
                               int machines);

struct RestartConfig {
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

struct WindowEvent {
  Slot start = 0;
  Slot end = 0;  // last slot of the window; the target takes over at end + 1
  bool chained = false;  // started at the end of the previous window
};

/// Non-clairvoyant resynchronisation engine behind restarts and switches.
///
/// A window opened at slot t covers [t, t + w] with w = l_max + d_max. During
/// the window the engine that was active keeps running the jobs it already
/// holds but sees no new arrivals. Each job arriving in the window is held
/// back and presented at t + w + 1 with its latest start unchanged, or
/// rejected if that start has passed. At t + w + 1 a fresh target engine
/// takes over and is fed the held-back jobs first, in their original order.
/// Window requests that fall inside an open window wait for it to close; if
/// several do, the latest one wins.
class ResyncMechanism final : public Cloneable<ResyncMechanism, NonClairvoyantMechanism> {
 public:
  explicit ResyncMechanism(NonClairvoyantHandle initial);

  /// Opens a window at t whose target is a fresh copy of `target`.
  void schedule(Slot t, NonClairvoyantHandle target);
  /// Opens a window targeting a fresh copy of the initial engine at every
  /// slot t <= T whose coin comes up heads.
  void set_random_restarts(const RestartConfig& cfg);
  /// Opens a window at the next step() call (which must be for slot t).
  void request_window(Slot t, NonClairvoyantHandle target);

  [[nodiscard]] std::string kind() const override { return "resync"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  void step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
            NcEvents& out) override;
  [[nodiscard]] bool idle() const override;
  void encode(StateWriter& out) const override;
  /// Encodes only what decides behaviour after the open window closes: the
  /// window end, the held-back reports, pending requests and the target.
  void encode_next_side(StateWriter& out) const;

  [[nodiscard]] bool in_window() const { return in_window_; }
  [[nodiscard]] const std::vector<WindowEvent>& windows() const { return windows_; }
  [[nodiscard]] const std::optional<CoinSource>& coins() const { return coins_; }

 private:
  void open_window(Slot t, NonClairvoyantHandle target, bool chained);
  NonClairvoyantHandle fresh(const NonClairvoyantHandle& proto) const;

  NonClairvoyantHandle initial_;
  std::map<Slot, NonClairvoyantHandle> schedule_;
  std::optional<CoinSource> coins_;
  std::optional<std::pair<Slot, NonClairvoyantHandle>> requested_;

  Environment env_;
  NonClairvoyantHandle active_;
  NonClairvoyantHandle target_;
  NonClairvoyantHandle pending_;
  bool in_window_ = false;
  Slot window_end_ = 0;
  std::vector<NcReport> held_;  // original reports, arrival order
  std::vector<WindowEvent> windows_;
};

/// C: behaves as A, then switches to a fresh B through a window opened at s.
NonClairvoyantHandle switch_nonclairvoyant(NonClairvoyantHandle a, NonClairvoyantHandle b, Slot s);
/// M restarted at each of the given slots.
NonClairvoyantHandle restart(NonClairvoyantHandle m, const std::vector<Slot>& slots);
NonClairvoyantHandle with_random_restarts(NonClairvoyantHandle m, const RestartConfig& cfg);

}  // namespace truthsched
