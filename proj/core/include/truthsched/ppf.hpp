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

#include <deque>
#include <optional>
#include <vector>

#include "truthsched/mechanism.hpp"

namespace truthsched {

/// Posted-price FIFO for clairvoyant jobs. A job is rejected when its value is
/// below the price or when its window holds fewer than `length` slots with a
/// free unit; otherwise it gets the earliest such slots (lowest free machine
/// in each) and pays price * length.
class PpfClairvoyant final : public Cloneable<PpfClairvoyant, ClairvoyantMechanism> {
 public:
  explicit PpfClairvoyant(Value price);

  [[nodiscard]] std::string kind() const override { return "ppf-clairvoyant"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  Decision on_arrival(const JobType& job) override;
  [[nodiscard]] const SlotGrid& committed() const override { return grid_; }
  void encode(StateWriter& out) const override;

  [[nodiscard]] Value price() const { return price_; }

 private:
  Value price_;
  SlotGrid grid_;
};

/// Posted-price FIFO for non-clairvoyant jobs. Reports below the price are
/// rejected on arrival; the rest queue in arrival order and idle machines pull
/// the queue head. A queued job whose wait budget runs out is deleted. A
/// started job pays the price for each unit it ran, charged at completion.
class PpfNonClairvoyant final : public Cloneable<PpfNonClairvoyant, NonClairvoyantMechanism> {
 public:
  explicit PpfNonClairvoyant(Value price);

  [[nodiscard]] std::string kind() const override { return "ppf-nonclairvoyant"; }
  [[nodiscard]] std::string name() const override;
  void reset(const Environment& env) override;
  void step(Slot t, std::span<const JobId> finished, std::span<const NcReport> arrivals,
            NcEvents& out) override;
  [[nodiscard]] bool idle() const override;
  void encode(StateWriter& out) const override;

  [[nodiscard]] Value price() const { return price_; }

 private:
  struct Running {
    JobId id;
    Slot start;
  };

  Value price_;
  std::deque<NcReport> queue_;
  std::vector<std::optional<Running>> lanes_;
};

std::string format_price(Value price);

}  // namespace truthsched
