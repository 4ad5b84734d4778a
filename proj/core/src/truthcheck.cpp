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

#include "truthsched/truthcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace truthsched {

void CheckReport::merge(CheckReport other) {
  violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                    std::make_move_iterator(other.violations.end()));
  reruns += other.reruns;
  partial = partial || other.partial;
}

std::vector<JobType> misreports(const JobType& truth, const Instance& inst, const MisreportGrid& grid) {
  std::vector<Value> values;
  for (int k = 0; k < grid.value_points; ++k) {
    values.push_back(grid.value_points == 1 ? inst.bounds.v_max
                                            : inst.bounds.v_max * k / (grid.value_points - 1));
  }
  if (std::find(values.begin(), values.end(), truth.value) == values.end()) values.push_back(truth.value);

  const bool clairvoyant = inst.setting == Setting::clairvoyant;
  std::vector<JobType> out;
  const Slot last_arrival = std::min(inst.horizon, truth.arrival + grid.max_arrival_delay);
  for (Slot a = truth.arrival; a <= last_arrival; ++a) {
    std::vector<Slot> deadlines;
    if (!grid.vary_deadline) {
      deadlines.push_back(truth.deadline);
    } else if (clairvoyant) {
      for (Slot d = a; d <= std::min(inst.horizon, a + inst.bounds.d_max - 1); ++d) deadlines.push_back(d);
    } else {
      for (Slot d = 0; d <= inst.bounds.d_max; ++d) deadlines.push_back(d);
    }
    std::vector<Slot> lengths{truth.length};
    if (clairvoyant && grid.vary_length) {
      lengths.clear();
      for (Slot l = 1; l <= inst.bounds.l_max; ++l) lengths.push_back(l);
    }
    for (Slot d : deadlines) {
      if (clairvoyant && (d < a || d > inst.horizon || d - a + 1 > inst.bounds.d_max)) continue;
      for (Slot l : lengths) {
        for (Value v : values) {
          JobType r{truth.id, a, d, l, v};
          if (r == truth) continue;
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

namespace {

Allocation outcome_of(const MechanismFactory& factory, const Instance& inst, std::uint64_t seed) {
  return run(factory(seed), inst).allocation;
}

Instance with_report(const Instance& inst, const JobType& report) {
  Instance out = inst;
  for (JobType& j : out.jobs) {
    if (j.id == report.id) j = report;
  }
  out.sort_jobs();
  return out;
}

}  // namespace

CheckReport check_truthful(const MechanismFactory& factory, const Instance& inst, const CheckOptions& opts) {
  CheckReport report;
  for (std::uint64_t seed : opts.seeds) {
    const Allocation honest = outcome_of(factory, inst, seed);
    ++report.reruns;
    for (const JobType& truth : inst.jobs) {
      const double u_truth = utility(truth, inst.setting, honest.outcome(truth.id));
      for (const JobType& lie : misreports(truth, inst, opts.grid)) {
        if (report.reruns >= opts.budget) {
          report.partial = true;
          return report;
        }
        // Lies are run against the true lengths in the non-clairvoyant
        // setting: the machine, not the report, decides how long a job runs.
        JobType shown = lie;
        if (inst.setting == Setting::non_clairvoyant) shown.length = truth.length;
        const Instance altered = with_report(inst, shown);
        const Allocation a = outcome_of(factory, altered, seed);
        ++report.reruns;
        const double u_lie = utility(truth, inst.setting, a.outcome(truth.id));
        if (u_lie > u_truth + kValueTolerance) {
          report.violations.push_back(Violation{"truthful", inst, truth.id, truth, shown, false, u_truth, u_lie,
                                                seed, "misreport raises utility"});
        }
      }
    }
  }
  return report;
}

CheckReport check_order_respecting(const MechanismFactory& factory, const Instance& inst,
                                   const CheckOptions& opts) {
  CheckReport report;
  const bool clairvoyant = inst.setting == Setting::clairvoyant;
  for (std::uint64_t seed : opts.seeds) {
    const Allocation base = outcome_of(factory, inst, seed);
    ++report.reruns;
    for (std::size_t k = 1; k < inst.jobs.size(); ++k) {
      const JobType& later = inst.jobs[k];
      std::vector<std::pair<JobType, bool>> edits{{later, true}};
      auto add = [&](JobType j) {
        if (j != later) edits.emplace_back(j, false);
      };
      add(JobType{later.id, later.arrival, later.deadline, later.length, 0.0});
      add(JobType{later.id, later.arrival, later.deadline, later.length, inst.bounds.v_max});
      add(JobType{later.id, later.arrival, later.deadline, later.length == 1 ? inst.bounds.l_max : 1, later.value});
      if (clairvoyant) {
        add(JobType{later.id, later.arrival, std::min(inst.horizon, later.arrival + inst.bounds.d_max - 1),
                    later.length, later.value});
        if (later.arrival < later.deadline) {
          add(JobType{later.id, later.arrival + 1, later.deadline, later.length, later.value});
        }
      } else {
        add(JobType{later.id, later.arrival, later.deadline == 0 ? inst.bounds.d_max : 0, later.length,
                    later.value});
        if (later.arrival < inst.horizon) {
          add(JobType{later.id, later.arrival + 1, later.deadline, later.length, later.value});
        }
      }
      for (const auto& [edit, remove] : edits) {
        if (report.reruns >= opts.budget) {
          report.partial = true;
          return report;
        }
        Instance altered = inst;
        if (remove) {
          std::erase_if(altered.jobs, [&](const JobType& j) { return j.id == later.id; });
        } else {
          altered = with_report(inst, edit);
        }
        const Allocation a = outcome_of(factory, altered, seed);
        ++report.reruns;
        for (std::size_t e = 0; e < k; ++e) {
          const JobType& earlier = inst.jobs[e];
          if (earlier.order_key() >= later.order_key()) continue;
          if (!(a.outcome(earlier.id) == base.outcome(earlier.id))) {
            Violation v{"order-respecting", inst, earlier.id, earlier, edit, remove,
                        base.outcome(earlier.id).payment, a.outcome(earlier.id).payment, seed,
                        remove ? "deleting a later job changed this job's outcome"
                               : "editing a later job changed this job's outcome"};
            report.violations.push_back(std::move(v));
          }
        }
      }
    }
  }
  return report;
}

bool replay_violation(const MechanismFactory& factory, const Violation& v) {
  if (v.check != "truthful") return false;
  const Allocation honest = outcome_of(factory, v.instance, v.seed);
  const Allocation lie = outcome_of(factory, with_report(v.instance, v.report), v.seed);
  const double u_truth = utility(v.truth, v.instance.setting, honest.outcome(v.job));
  const double u_lie = utility(v.truth, v.instance.setting, lie.outcome(v.job));
  return u_truth == v.utility_truth && u_lie == v.utility_lie;
}

CoinTrace coin_trace(const ResyncMechanism& resync) {
  CoinTrace trace;
  for (const WindowEvent& w : resync.windows()) trace.window_starts.push_back(w.start);
  return trace;
}

CoinTrace coin_trace(const Ftbs& ftbs) {
  CoinTrace trace = coin_trace(ftbs.core());
  trace.heads = ftbs.log().heads;
  return trace;
}

std::string check_restart_report_independence(const CoinTrace& original, const CoinTrace& altered) {
  auto first_difference = [](const std::vector<Slot>& a, const std::vector<Slot>& b) {
    const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    if (ia != a.end()) return "slot " + std::to_string(*ia);
    return "slot " + std::to_string(*ib);
  };
  if (original.heads != altered.heads) {
    return "coin sequences differ at " + first_difference(original.heads, altered.heads);
  }
  if (original.window_starts != altered.window_starts) {
    return "window openings differ at " + first_difference(original.window_starts, altered.window_starts);
  }
  return {};
}

Decision FirstPriceClairvoyant::on_arrival(const JobType& job) {
  Decision d = inner_.on_arrival(job);
  if (d.accepted()) d.payment = job.value * static_cast<Value>(job.length);
  return d;
}

void RepricingNonClairvoyant::reset(const Environment& env) {
  inner_.reset(env);
  arrivals_seen_ = 0;
  started_at_count_.clear();
}

void RepricingNonClairvoyant::step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
                                   NcEvents& out) {
  const std::size_t first_charge = out.charges.size();
  const std::size_t first_start = out.starts.size();
  arrivals_seen_ += static_cast<std::int64_t>(arrivals.size());
  inner_.step(t, finished, arrivals, out);
  for (std::size_t k = first_charge; k < out.charges.size(); ++k) {
    auto it = std::find_if(started_at_count_.begin(), started_at_count_.end(),
                           [&](const auto& p) { return p.first == out.charges[k].id; });
    if (it == started_at_count_.end()) continue;
    out.charges[k].amount += static_cast<Value>(arrivals_seen_ - it->second);
    started_at_count_.erase(it);
  }
  for (std::size_t k = first_start; k < out.starts.size(); ++k) {
    started_at_count_.emplace_back(out.starts[k].id, arrivals_seen_);
  }
}

void RepricingNonClairvoyant::encode(StateWriter& out) const {
  out.put(kind());
  inner_.encode(out);
  out.put(arrivals_seen_);
  for (const auto& [id, n] : started_at_count_) {
    out.put(id);
    out.put(n);
  }
}

CoinPolicy report_hash_coins(double gamma, std::uint64_t seed) {
  return [gamma, seed](Slot t, std::span<const NcReport> arrivals) {
    std::uint64_t h = derive_seed(seed, static_cast<std::uint64_t>(t));
    for (const NcReport& r : arrivals) {
      h = splitmix64(h ^ static_cast<std::uint64_t>(std::llround(r.value * 1024.0)));
      h = splitmix64(h ^ static_cast<std::uint64_t>(r.wait_budget));
    }
    return to_unit_open(h) < gamma;
  };
}

}  // namespace truthsched
