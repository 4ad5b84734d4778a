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
#include <vector>

#include "truthsched/instances.hpp"

namespace truthsched {

/// Expected welfare per round of the non-clairvoyant lower-bound instance
/// under posted-price FIFO at prices 1 and 2, computed by enumerating every
/// length outcome with its exact probability. A round's welfare counts the
/// jobs whose id belongs to that round.
struct NcLbRoundValues {
  std::vector<double> price1;
  std::vector<double> price2;
};

NcLbRoundValues nc_lb_expected_round_values(const LossSequence& losses);

/// One enumerated switch from the price-2 to the price-1 schedule.
struct NcLbSwitchCase {
  std::vector<NcLbRound> rounds;
  std::int64_t round = 0;  // round whose slots contain the switch
  Slot slot = 0;           // first slot run by the target
  bool at_completion = false;  // a source job finished at slot - 1 (else the source was idle)
  /// Value of the target's job in flight at the switch slot: it started
  /// while the source was in control and has a zero wait budget, so the
  /// switched schedule can never run it.
  double loss = 0.0;
};

/// Every switch slot in each interior round of a `rounds`-round instance at
/// which the price-2 schedule has just completed a job or is idle, for every
/// combination of length outcomes.
std::vector<NcLbSwitchCase> nc_lb_switch_cases(std::int64_t rounds);

}  // namespace truthsched
