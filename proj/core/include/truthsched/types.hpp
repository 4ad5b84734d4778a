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

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace truthsched {

/// Slot index on the 1-based integer time grid.
using Slot = std::int64_t;
using JobId = std::int64_t;
/// Value per unit of processed length.
using Value = double;

/// Comparison tolerance for welfare and utility arithmetic on floating values.
inline constexpr Value kValueTolerance = 1e-9;

/// Whether job lengths are reported at arrival (clairvoyant) or only observed
/// at completion (non-clairvoyant). The deadline field changes meaning with it.
enum class Setting { clairvoyant, non_clairvoyant };

std::string_view to_string(Setting setting);
Setting parse_setting(std::string_view text);

struct Bounds {
  Value v_max = 1.0;
  Slot d_max = 1;
  Slot l_max = 1;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// One job's reported type.
///
/// `deadline` is the latest completion slot in the clairvoyant setting and the
/// number of slots the job is willing to wait before starting in the
/// non-clairvoyant setting.
struct JobType {
  JobId id = 0;
  Slot arrival = 1;
  Slot deadline = 1;
  Slot length = 1;
  Value value = 0.0;

  /// Arrival order: (arrival, id).
  [[nodiscard]] std::pair<Slot, JobId> order_key() const { return {arrival, id}; }

  friend bool operator==(const JobType&, const JobType&) = default;
};

inline bool arrives_before(const JobType& lhs, const JobType& rhs) {
  return lhs.order_key() < rhs.order_key();
}

/// The part of an instance a mechanism is allowed to know up front.
struct Environment {
  Slot horizon = 1;
  int machines = 1;
  Bounds bounds;
  Setting setting = Setting::clairvoyant;

  /// Sync window used by restarts and non-clairvoyant switches.
  [[nodiscard]] Slot sync_window() const { return bounds.l_max + bounds.d_max; }

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct Instance {
  std::vector<JobType> jobs;  // sorted by order_key
  Slot horizon = 1;
  int machines = 1;
  Bounds bounds;
  Setting setting = Setting::clairvoyant;

  [[nodiscard]] Environment environment() const {
    return Environment{horizon, machines, bounds, setting};
  }
  [[nodiscard]] const JobType& job(JobId id) const;
  [[nodiscard]] const JobType* find(JobId id) const;
  /// Restores the order_key ordering after edits.
  void sort_jobs();

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Every JobType and Instance invariant that fails; empty means well formed.
std::vector<std::string> validate_instance(const Instance& inst);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Throws ValidationError when validate_instance reports anything.
void require_valid(const Instance& inst);

}  // namespace truthsched
