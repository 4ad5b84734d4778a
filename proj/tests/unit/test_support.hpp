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

#include <set>
#include <vector>

#include "truthsched/allocation.hpp"
#include "truthsched/mechanism.hpp"
#include "truthsched/ppf.hpp"

namespace truthsched::testing {

inline Instance clairvoyant_instance(Slot horizon, int machines, Bounds bounds, std::vector<JobType> jobs) {
  Instance inst;
  inst.horizon = horizon;
  inst.machines = machines;
  inst.bounds = bounds;
  inst.setting = Setting::clairvoyant;
  inst.jobs = std::move(jobs);
  inst.sort_jobs();
  return inst;
}

inline Instance nc_instance(Slot horizon, int machines, Bounds bounds, std::vector<JobType> jobs) {
  Instance inst = clairvoyant_instance(horizon, machines, bounds, std::move(jobs));
  inst.setting = Setting::non_clairvoyant;
  return inst;
}

inline ClairvoyantHandle ppf_c(Value price) { return make_handle<PpfClairvoyant>(price); }
inline NonClairvoyantHandle ppf_nc(Value price) { return make_handle<PpfNonClairvoyant>(price); }

inline std::vector<Slot> slots_of(const JobOutcome& o) {
  std::vector<Slot> s;
  for (const Unit& u : o.units) s.push_back(u.slot);
  return s;
}

}  // namespace truthsched::testing
