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

#include "truthsched/lower_bounds.hpp"

#include <stdexcept>

#include "truthsched/ppf.hpp"
#include "truthsched/runner.hpp"

namespace truthsched {
namespace {

/// Calls fn(rounds, probability) for every length outcome. Round 0 has no
/// value-2 job, so its long_third flag stays false.
template <class Fn>
void for_each_outcome(const LossSequence& losses, Fn&& fn) {
  const std::size_t n = losses.size();
  const std::size_t bits = 2 * n - 1;
  if (bits >= 31) throw std::invalid_argument("too many rounds to enumerate");
  for (std::uint32_t mask = 0; mask < (1U << bits); ++mask) {
    std::vector<NcLbRound> rounds(n);
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      rounds[i].long_first = ((mask >> i) & 1U) != 0;
      const double p1 = nc_lb_long_first_probability(losses[i]);
      p *= rounds[i].long_first ? p1 : 1.0 - p1;
      if (i >= 1) {
        rounds[i].long_third = ((mask >> (n + i - 1)) & 1U) != 0;
        const double p2 = nc_lb_long_third_probability(losses[i]);
        p *= rounds[i].long_third ? p2 : 1.0 - p2;
      }
    }
    fn(rounds, p);
  }
}

std::vector<double> round_welfare(const Instance& inst, const Allocation& alloc, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (JobId id : served_jobs(alloc, inst)) {
    const JobType& j = inst.job(id);
    out[static_cast<std::size_t>(nc_lb_round(id))] += j.value * static_cast<double>(j.length);
  }
  return out;
}

struct Span {
  JobId id = 0;
  Slot start = 0;
  Slot end = 0;  // last slot
  double value = 0.0;
};

std::vector<Span> spans(const Instance& inst, const Allocation& alloc) {
  std::vector<Span> out;
  for (JobId id : served_jobs(alloc, inst)) {
    const JobType& j = inst.job(id);
    const auto& units = alloc.outcome(id).units;
    out.push_back(Span{id, units.front().slot, units.back().slot, j.value * static_cast<double>(j.length)});
  }
  return out;
}

}  // namespace

NcLbRoundValues nc_lb_expected_round_values(const LossSequence& losses) {
  validate_losses(losses);
  if (losses.empty()) throw std::invalid_argument("need at least one round");
  NcLbRoundValues out;
  out.price1.assign(losses.size(), 0.0);
  out.price2.assign(losses.size(), 0.0);
  for_each_outcome(losses, [&](const std::vector<NcLbRound>& rounds, double p) {
    if (p == 0.0) return;
    const Instance inst = nc_lb_instance(rounds);
    PpfNonClairvoyant a1(1.0);
    PpfNonClairvoyant a2(2.0);
    const auto w1 = round_welfare(inst, run_nonclairvoyant(a1, inst).allocation, rounds.size());
    const auto w2 = round_welfare(inst, run_nonclairvoyant(a2, inst).allocation, rounds.size());
    for (std::size_t i = 0; i < rounds.size(); ++i) {
      out.price1[i] += p * w1[i];
      out.price2[i] += p * w2[i];
    }
  });
  return out;
}

std::vector<NcLbSwitchCase> nc_lb_switch_cases(std::int64_t n_rounds) {
  if (n_rounds < 3) throw std::invalid_argument("switch enumeration needs at least three rounds");
  std::vector<NcLbSwitchCase> out;
  const LossSequence any(static_cast<std::size_t>(n_rounds), LossPair{0.5, 0.5});
  for_each_outcome(any, [&](const std::vector<NcLbRound>& rounds, double) {
    const Instance inst = nc_lb_instance(rounds);
    PpfNonClairvoyant a1(1.0);
    PpfNonClairvoyant a2(2.0);
    const auto source = spans(inst, run_nonclairvoyant(a2, inst).allocation);
    const auto target = spans(inst, run_nonclairvoyant(a1, inst).allocation);
    // A source job started before t that still holds the machine at t.
    auto source_mid_job = [&](Slot t) {
      for (const Span& s : source) {
        if (s.start < t && t <= s.end) return true;
      }
      return false;
    };
    for (std::int64_t i = 1; i + 1 < n_rounds; ++i) {
      // Round i's slots run from its value-2 job's arrival to the slot
      // before the next one's.
      for (Slot slot = 8 * i - 2; slot <= 8 * i + 5; ++slot) {
        if (source_mid_job(slot)) continue;
        bool completion = false;
        for (const Span& s : source) completion = completion || s.end == slot - 1;
        double loss = 0.0;
        for (const Span& s : target) {
          if (s.start < slot && slot <= s.end) loss += s.value;
        }
        out.push_back(NcLbSwitchCase{rounds, i, slot, completion, loss});
      }
    }
  });
  return out;
}

}  // namespace truthsched
