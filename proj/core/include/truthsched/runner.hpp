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

#include "truthsched/allocation.hpp"
#include "truthsched/mechanism.hpp"

namespace truthsched {

struct RunOptions {
  /// First simulated slot; jobs arriving earlier are never shown to the
  /// mechanism.
  Slot start = 1;
  /// Reset the mechanism to its initial state for the instance's environment
  /// before the first slot.
  bool reset = true;
};

struct RunResult {
  Allocation allocation;
  WelfareSeries welfare;
  Value total = 0.0;
};

/// Called after every simulated slot with the slot index and the mechanism.
using ClairvoyantObserver = std::function<void(Slot, const ClairvoyantMechanism&)>;
using NonClairvoyantObserver = std::function<void(Slot, const NonClairvoyantMechanism&)>;

/// Drives a prompt mechanism slot by slot: begin_slot(t), then every arrival
/// at t in (arrival, id) order. Decisions are checked for feasibility and for
/// using only slots not earlier than the arrival.
RunResult run_clairvoyant(ClairvoyantMechanism& mech, const Instance& inst, const RunOptions& opts = {},
                          const ClairvoyantObserver& observer = {});

/// Physical non-clairvoyant simulation: lengths stay hidden from the
/// mechanism; a job started at t on lane k occupies k for its true length and
/// is reported finished at the slot after its last unit. Slots continue past
/// the horizon until the mechanism is idle and every lane is free.
RunResult run_nonclairvoyant(NonClairvoyantMechanism& mech, const Instance& inst,
                             const RunOptions& opts = {}, const NonClairvoyantObserver& observer = {});

/// Runs a copy of `mech` (the handle itself is left untouched).
RunResult run(const MechanismHandle& mech, const Instance& inst, const RunOptions& opts = {});

}  // namespace truthsched
