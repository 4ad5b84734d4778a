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

#include "truthsched/ppf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace truthsched {

std::string format_price(Value price) {
  std::ostringstream os;
  os << price;
  return os.str();
}

namespace {

void require_price(Value price) {
  if (!(price >= 0.0)) throw std::invalid_argument("price must be non-negative");
}

}  // namespace

PpfClairvoyant::PpfClairvoyant(Value price) : price_(price) { require_price(price); }

std::string PpfClairvoyant::name() const { return "ppf:" + format_price(price_); }

void PpfClairvoyant::reset(const Environment& env) { grid_ = SlotGrid(env.horizon, env.machines); }

Decision PpfClairvoyant::on_arrival(const JobType& job) {
  if (job.value < price_) return {};
  std::vector<Slot> slots;
  for (Slot t = job.arrival; t <= job.deadline && static_cast<Slot>(slots.size()) < job.length; ++t) {
    if (grid_.free(t) > 0) slots.push_back(t);
  }
  if (static_cast<Slot>(slots.size()) < job.length) return {};
  Decision d;
  for (Slot t : slots) d.units.push_back(Unit{t, grid_.take(t)});
  d.payment = price_ * static_cast<Value>(job.length);
  return d;
}

void PpfClairvoyant::encode(StateWriter& out) const {
  out.put(kind());
  out.put(price_);
  grid_.encode(out);
}

PpfNonClairvoyant::PpfNonClairvoyant(Value price) : price_(price) { require_price(price); }

std::string PpfNonClairvoyant::name() const { return "ppf:" + format_price(price_); }

void PpfNonClairvoyant::reset(const Environment& env) {
  queue_.clear();
  lanes_.assign(static_cast<std::size_t>(env.machines), std::nullopt);
}

void PpfNonClairvoyant::step(Slot t, std::span<const JobId> finished,
                             std::span<const NcReport> arrivals, NcEvents& out) {
  for (JobId id : finished) {
    auto lane = std::find_if(lanes_.begin(), lanes_.end(),
                             [id](const auto& r) { return r && r->id == id; });
    if (lane == lanes_.end()) throw std::logic_error("finished job was not running");
    out.charges.push_back(NcCharge{id, price_ * static_cast<Value>(t - (*lane)->start)});
    lane->reset();
  }
  for (const NcReport& r : arrivals) {
    if (r.value < price_ || r.wait_budget < 0) {
      out.rejected.push_back(r.id);
    } else {
      queue_.push_back(r);
    }
  }
  std::erase_if(queue_, [&](const NcReport& r) {
    if (t <= r.latest_start()) return false;
    out.rejected.push_back(r.id);
    return true;
  });
  for (std::size_t m = 0; m < lanes_.size() && !queue_.empty(); ++m) {
    if (lanes_[m]) continue;
    lanes_[m] = Running{queue_.front().id, t};
    out.starts.push_back(NcStart{queue_.front().id, static_cast<int>(m)});
    queue_.pop_front();
  }
}

bool PpfNonClairvoyant::idle() const {
  return queue_.empty() && std::none_of(lanes_.begin(), lanes_.end(), [](const auto& r) { return r.has_value(); });
}

void PpfNonClairvoyant::encode(StateWriter& out) const {
  out.put(kind());
  out.put(price_);
  out.put(static_cast<std::int64_t>(queue_.size()));
  for (const NcReport& r : queue_) {
    out.put(r.id);
    out.put(r.arrival);
    out.put(r.wait_budget);
    out.put(r.value);
  }
  out.put(static_cast<std::int64_t>(lanes_.size()));
  for (const auto& lane : lanes_) {
    out.put(lane.has_value());
    if (lane) {
      out.put(lane->id);
      out.put(lane->start);
    }
  }
}

}  // namespace truthsched
