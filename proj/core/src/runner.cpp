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

#include "truthsched/runner.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace truthsched {

namespace {

RunResult finish(Allocation alloc, const Instance& inst) {
  RunResult r;
  r.welfare = welfare_series(alloc, inst);
  r.total = r.welfare.total();
  r.allocation = std::move(alloc);
  return r;
}

}  // namespace

RunResult run_clairvoyant(ClairvoyantMechanism& mech, const Instance& inst, const RunOptions& opts,
                          const ClairvoyantObserver& observer) {
  if (inst.setting != Setting::clairvoyant) {
    throw std::invalid_argument("clairvoyant mechanism needs a clairvoyant instance");
  }
  if (opts.reset) mech.reset(inst.environment());
  Allocation alloc;
  std::size_t next = 0;
  while (next < inst.jobs.size() && inst.jobs[next].arrival < opts.start) ++next;
  for (Slot t = opts.start; t <= inst.horizon; ++t) {
    mech.begin_slot(t);
    for (; next < inst.jobs.size() && inst.jobs[next].arrival == t; ++next) {
      const JobType& job = inst.jobs[next];
      Decision d = mech.on_arrival(job);
      for (const Unit& u : d.units) {
        if (u.slot < t) throw FeasibilityError(u.slot, "unit before the job's arrival slot");
      }
      alloc.set(job.id, JobOutcome{std::move(d.units), d.payment});
    }
    if (observer) observer(t, mech);
  }
  alloc.check_feasible(inst.machines);
  return finish(std::move(alloc), inst);
}

RunResult run_nonclairvoyant(NonClairvoyantMechanism& mech, const Instance& inst, const RunOptions& opts,
                             const NonClairvoyantObserver& observer) {
  if (inst.setting != Setting::non_clairvoyant) {
    throw std::invalid_argument("non-clairvoyant mechanism needs a non-clairvoyant instance");
  }
  if (opts.reset) mech.reset(inst.environment());

  struct Lane {
    JobId id;
    Slot end;  // last occupied slot
  };
  std::vector<std::optional<Lane>> lanes(static_cast<std::size_t>(inst.machines));
  std::map<JobId, const JobType*> seen;  // arrived so far
  std::set<JobId> started;
  Allocation alloc;
  std::size_t next = 0;
  while (next < inst.jobs.size() && inst.jobs[next].arrival < opts.start) ++next;

  const Slot guard = inst.horizon + 4 * (inst.environment().sync_window() + 1) *
                                        (static_cast<Slot>(inst.jobs.size()) + 2) + 16;
  std::vector<JobId> finished;
  std::vector<NcReport> arrivals;
  NcEvents events;
  for (Slot t = opts.start;; ++t) {
    const bool lanes_busy =
        std::any_of(lanes.begin(), lanes.end(), [](const auto& l) { return l.has_value(); });
    if (t > inst.horizon && !lanes_busy && mech.idle()) break;
    if (t > guard) throw std::runtime_error("non-clairvoyant run did not drain");

    finished.clear();
    for (auto& lane : lanes) {
      if (lane && lane->end == t - 1) {
        finished.push_back(lane->id);
        lane.reset();
      }
    }
    arrivals.clear();
    for (; next < inst.jobs.size() && inst.jobs[next].arrival == t; ++next) {
      arrivals.push_back(to_report(inst.jobs[next]));
      seen.emplace(inst.jobs[next].id, &inst.jobs[next]);
    }
    events.clear();
    mech.step(t, finished, arrivals, events);

    for (const NcStart& s : events.starts) {
      const auto known = seen.find(s.id);
      if (known == seen.end()) throw std::logic_error("mechanism started an unknown job");
      if (!started.insert(s.id).second) throw std::logic_error("mechanism started a job twice");
      if (s.machine < 0 || s.machine >= inst.machines) {
        throw FeasibilityError(t, "machine index " + std::to_string(s.machine) + " out of range");
      }
      auto& lane = lanes[static_cast<std::size_t>(s.machine)];
      if (lane) throw FeasibilityError(t, "machine " + std::to_string(s.machine) + " is busy");
      const JobType& job = *known->second;
      lane = Lane{s.id, t + job.length - 1};
      JobOutcome o = alloc.outcome(s.id);
      for (Slot x = t; x <= lane->end; ++x) o.units.push_back(Unit{x, s.machine});
      alloc.set(s.id, std::move(o));
    }
    for (const NcCharge& c : events.charges) alloc.charge(c.id, c.amount);
    if (observer) observer(t, mech);
  }
  alloc.check_feasible(inst.machines);
  return finish(std::move(alloc), inst);
}

RunResult run(const MechanismHandle& mech, const Instance& inst, const RunOptions& opts) {
  if (mech.is_clairvoyant()) {
    ClairvoyantHandle copy = mech.clairvoyant();
    return run_clairvoyant(*copy, inst, opts);
  }
  NonClairvoyantHandle copy = mech.non_clairvoyant();
  return run_nonclairvoyant(*copy, inst, opts);
}

}  // namespace truthsched
