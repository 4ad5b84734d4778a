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

#include "truthsched/switching.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace truthsched {

namespace {

void encode_env(StateWriter& out, const Environment& env) {
  out.put(env.horizon);
  out.put(env.machines);
  out.put(env.bounds.v_max);
  out.put(env.bounds.d_max);
  out.put(env.bounds.l_max);
  out.put(env.setting == Setting::clairvoyant);
}

}  // namespace

SwitchClairvoyant::SwitchClairvoyant(ClairvoyantHandle a, ClairvoyantHandle b, Slot s)
    : a_proto_(std::move(a)), b_proto_(std::move(b)), s_(s) {
  if (!a_proto_ || !b_proto_) throw std::invalid_argument("switch needs two mechanisms");
  if (s < 1) throw std::invalid_argument("switch slot must be >= 1");
}

SwitchClairvoyant SwitchClairvoyant::splice(ClairvoyantHandle a, ClairvoyantHandle b, Slot s,
                                            const Environment& env) {
  SwitchClairvoyant c(a, b, s);
  c.env_ = env;
  c.a_ = std::move(a);
  c.b_ = std::move(b);
  return c;
}

std::string SwitchClairvoyant::name() const {
  return "switch(" + a_proto_->name() + "->" + b_proto_->name() + "@" + std::to_string(s_) + ")";
}

void SwitchClairvoyant::reset(const Environment& env) {
  env_ = env;
  a_ = a_proto_;
  b_ = b_proto_;
  a_->reset(env);
  b_->reset(env);
  grid_ = SlotGrid();
  audit_ = {};
}

void SwitchClairvoyant::release_source() {
  grid_ = a_->committed();
  if (const auto* inner = dynamic_cast<const SwitchClairvoyant*>(a_.get())) {
    audit_.replacements.insert(audit_.replacements.begin(), inner->audit().replacements.begin(),
                               inner->audit().replacements.end());
  }
  a_.reset();
  for (Slot t = s_; t <= s_ + env_.bounds.d_max - 1; ++t) grid_.block(t);
}

void SwitchClairvoyant::begin_slot(Slot t) {
  if (a_) {
    if (t < s_) {
      a_->begin_slot(t);
    } else {
      release_source();
    }
  }
  b_->begin_slot(t);
}

Decision SwitchClairvoyant::on_arrival(const JobType& job) {
  if (job.arrival < s_) {
    if (!a_) throw std::logic_error("pre-switch arrival after the switch slot");
    Decision d = a_->on_arrival(job);
    b_->on_arrival(job);
    return d;
  }
  if (a_) release_source();  // the runner skipped begin_slot(s)
  const Decision target = b_->on_arrival(job);
  if (job.deadline <= s_ + env_.bounds.d_max - 1) return {};
  if (!target.accepted()) return {};

  std::set<Slot> wanted;
  for (const Unit& u : target.units) wanted.insert(u.slot);
  std::vector<Slot> available;
  for (Slot t = job.arrival; t <= job.deadline; ++t) {
    if (grid_.free(t) > 0) available.push_back(t);
  }
  if (available.size() < wanted.size()) return {};

  std::vector<Slot> kept;
  std::vector<Slot> replaced;
  for (Slot t : wanted) (grid_.free(t) > 0 ? kept : replaced).push_back(t);
  std::vector<Slot> substitutes;
  for (Slot t : available) {
    if (substitutes.size() == replaced.size()) break;
    if (!std::binary_search(kept.begin(), kept.end(), t)) substitutes.push_back(t);
  }
  if (substitutes.size() < replaced.size()) return {};

  Decision d;
  for (Slot t : kept) d.units.push_back(Unit{t, grid_.take(t)});
  for (std::size_t k = 0; k < replaced.size(); ++k) {
    d.units.push_back(Unit{substitutes[k], grid_.take(substitutes[k])});
    audit_.replacements.push_back(Replacement{job.id, replaced[k], substitutes[k]});
  }
  std::sort(d.units.begin(), d.units.end());
  d.payment = target.payment;
  return d;
}

const SlotGrid& SwitchClairvoyant::committed() const { return a_ ? a_->committed() : grid_; }

void SwitchClairvoyant::encode(StateWriter& out) const {
  out.put(kind());
  out.put(s_);
  encode_env(out, env_);
  out.put(static_cast<bool>(a_));
  if (a_) a_->encode(out);
  b_->encode(out);
  grid_.encode(out);
  out.put(static_cast<std::int64_t>(audit_.replacements.size()));
  for (const auto& r : audit_.replacements) {
    out.put(r.job);
    out.put(r.replaced);
    out.put(r.replacement);
  }
}

ClairvoyantHandle switch_clairvoyant(ClairvoyantHandle a, ClairvoyantHandle b, Slot s) {
  return make_handle<SwitchClairvoyant>(std::move(a), std::move(b), s);
}

ClairvoyantHandle compose_chain(const SwitchPlan& plan) {
  if (plan.roster.empty()) throw std::invalid_argument("switch plan needs a nonempty roster");
  if (plan.switch_slots.size() + 1 != plan.roster.size()) {
    throw std::invalid_argument("switch plan needs one switch slot per roster member after the first");
  }
  if (!std::is_sorted(plan.switch_slots.begin(), plan.switch_slots.end()) ||
      std::adjacent_find(plan.switch_slots.begin(), plan.switch_slots.end()) != plan.switch_slots.end()) {
    throw std::invalid_argument("switch slots must be strictly increasing");
  }
  ClairvoyantHandle chain = plan.roster.front();
  for (std::size_t i = 0; i < plan.switch_slots.size(); ++i) {
    chain = switch_clairvoyant(std::move(chain), plan.roster[i + 1], plan.switch_slots[i]);
  }
  return chain;
}

FreeSlotAudit audit_free_slots(const Allocation& c_alloc, const Allocation& b_alloc, Slot s, Slot d_max,
                               int /*machines*/) {
  const auto c_occ = c_alloc.occupancy();
  const auto b_occ = b_alloc.occupancy();
  auto at = [](const std::vector<int>& occ, Slot t) {
    return t < static_cast<Slot>(occ.size()) ? occ[static_cast<std::size_t>(t)] : 0;
  };
  FreeSlotAudit audit;
  const Slot last = static_cast<Slot>(std::max(c_occ.size(), b_occ.size()));
  for (Slot t = std::max<Slot>(s + d_max, 1); t < last; ++t) {
    const int free = std::max(0, at(b_occ, t) - at(c_occ, t));
    if (free == 0) continue;
    if (!audit.first_free) audit.first_free = t;
    audit.total += free;
    audit.support[t] = free;
  }
  return audit;
}

ResyncMechanism::ResyncMechanism(NonClairvoyantHandle initial) : initial_(std::move(initial)) {
  if (!initial_) throw std::invalid_argument("resync needs an initial mechanism");
}

void ResyncMechanism::schedule(Slot t, NonClairvoyantHandle target) {
  if (!target) throw std::invalid_argument("window target must be a mechanism");
  schedule_.insert_or_assign(t, std::move(target));
}

void ResyncMechanism::set_random_restarts(const RestartConfig& cfg) {
  coins_ = CoinSource(cfg.gamma, cfg.seed);
}

void ResyncMechanism::request_window(Slot t, NonClairvoyantHandle target) {
  if (!target) throw std::invalid_argument("window target must be a mechanism");
  requested_.emplace(t, std::move(target));
}

std::string ResyncMechanism::name() const { return "resync(" + initial_->name() + ")"; }

NonClairvoyantHandle ResyncMechanism::fresh(const NonClairvoyantHandle& proto) const {
  NonClairvoyantHandle h = proto;
  h->reset(env_);
  return h;
}

void ResyncMechanism::reset(const Environment& env) {
  env_ = env;
  active_ = fresh(initial_);
  target_.reset();
  pending_.reset();
  requested_.reset();
  in_window_ = false;
  window_end_ = 0;
  held_.clear();
  windows_.clear();
}

void ResyncMechanism::open_window(Slot t, NonClairvoyantHandle target, bool chained) {
  in_window_ = true;
  window_end_ = t + env_.sync_window();
  target_ = std::move(target);
  windows_.push_back(WindowEvent{t, window_end_, chained});
}

void ResyncMechanism::step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
                           NcEvents& out) {
  NonClairvoyantHandle req;
  if (auto it = schedule_.find(t); it != schedule_.end()) req = fresh(it->second);
  if (coins_ && t <= env_.horizon && coins_->heads(t)) req = fresh(initial_);
  if (requested_) {
    if (requested_->first == t) req = fresh(requested_->second);
    requested_.reset();
  }

  std::vector<NcReport> feed;
  const bool ending = in_window_ && t == window_end_ + 1;
  if (in_window_ && !ending) {
    if (req) pending_ = std::move(req);
  } else if (ending) {
    if (!active_->idle() || !finished.empty()) {
      throw std::logic_error("drained mechanism still busy at the end of its window");
    }
    if (req) pending_ = std::move(req);
    active_ = std::move(target_);
    target_.reset();
    if (pending_) {
      NonClairvoyantHandle next = std::move(pending_);
      pending_.reset();
      open_window(t, std::move(next), true);
      std::erase_if(held_, [&](const NcReport& r) {
        if (r.latest_start() >= window_end_ + 1) return false;
        out.rejected.push_back(r.id);
        return true;
      });
    } else {
      in_window_ = false;
      for (const NcReport& r : held_) {
        feed.push_back(NcReport{r.id, t, r.latest_start() - t, r.value});
      }
      held_.clear();
    }
  } else if (req) {
    open_window(t, std::move(req), false);
  }

  if (in_window_) {
    for (const NcReport& r : arrivals) {
      if (r.latest_start() < window_end_ + 1) {
        out.rejected.push_back(r.id);
      } else {
        held_.push_back(r);
      }
    }
    active_->step(t, finished, {}, out);
  } else {
    feed.insert(feed.end(), arrivals.begin(), arrivals.end());
    active_->step(t, finished, feed, out);
  }
}

bool ResyncMechanism::idle() const { return active_->idle() && held_.empty(); }

namespace {

void encode_reports(StateWriter& out, const std::vector<NcReport>& reports) {
  out.put(static_cast<std::int64_t>(reports.size()));
  for (const NcReport& r : reports) {
    out.put(r.id);
    out.put(r.arrival);
    out.put(r.wait_budget);
    out.put(r.value);
  }
}

void encode_optional(StateWriter& out, const NonClairvoyantHandle& h) {
  out.put(static_cast<bool>(h));
  if (h) h->encode(out);
}

}  // namespace

void ResyncMechanism::encode_next_side(StateWriter& out) const {
  out.put(in_window_);
  out.put(window_end_);
  encode_reports(out, held_);
  encode_optional(out, pending_);
  encode_optional(out, target_);
}

void ResyncMechanism::encode(StateWriter& out) const {
  out.put(kind());
  encode_next_side(out);
  active_->encode(out);
}

NonClairvoyantHandle switch_nonclairvoyant(NonClairvoyantHandle a, NonClairvoyantHandle b, Slot s) {
  auto c = std::make_unique<ResyncMechanism>(std::move(a));
  c->schedule(s, std::move(b));
  return NonClairvoyantHandle(std::move(c));
}

NonClairvoyantHandle restart(NonClairvoyantHandle m, const std::vector<Slot>& slots) {
  auto c = std::make_unique<ResyncMechanism>(m);
  for (Slot t : slots) c->schedule(t, m);
  return NonClairvoyantHandle(std::move(c));
}

NonClairvoyantHandle with_random_restarts(NonClairvoyantHandle m, const RestartConfig& cfg) {
  auto c = std::make_unique<ResyncMechanism>(std::move(m));
  c->set_random_restarts(cfg);
  return NonClairvoyantHandle(std::move(c));
}

}  // namespace truthsched
