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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "truthsched/combiners.hpp"
#include "truthsched/mechanism.hpp"
#include "truthsched/truthcheck.hpp"

namespace truthsched::cli {

/// Bad flags, descriptors or seed lists. The front end maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A roster member or standalone mechanism named on the command line:
///   ppf:1   ppf:price=1.5:clairvoyant   ppf:2:nc   first-price   repricing:1
struct MechanismDescriptor {
  std::string kind;  // "ppf", "first-price" or "repricing"
  Value price = 0.0;
  std::optional<Setting> setting;  // fixed by the descriptor, else taken from the instance
  std::string text;                // as written

  [[nodiscard]] Setting resolve(Setting instance_setting) const;
  [[nodiscard]] ClairvoyantHandle clairvoyant() const;
  [[nodiscard]] NonClairvoyantHandle non_clairvoyant() const;
  [[nodiscard]] MechanismHandle make(Setting instance_setting) const;
};

MechanismDescriptor parse_mechanism(std::string_view text);
/// Comma-separated list of mechanism descriptors.
std::vector<MechanismDescriptor> parse_roster(std::string_view text);

/// lazy-fpl[:C=<cost>][:eps=<rate>] or exp3:doubling.
struct LearnerDescriptor {
  std::string kind;  // "lazy-fpl" or "exp3"
  std::optional<double> switching_cost;
  std::optional<double> epsilon;
  std::string text;
};

LearnerDescriptor parse_learner(std::string_view text);

/// "1..50", "3", or "1,4,9" (ranges and single seeds may be mixed).
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Comma-separated positive integers.
std::vector<Slot> parse_horizons(std::string_view text);

/// A combiner over a roster, or a single mechanism.
struct MechanismChoice {
  std::optional<std::string> combiner;  // "fts" or "ftbs"
  std::vector<MechanismDescriptor> roster;  // a single entry without a combiner
  std::optional<LearnerDescriptor> learner;
  std::optional<double> gamma;  // FTBS; empty means the default formula

  [[nodiscard]] std::string label() const;
  /// Setting of the choice, or empty when every member adapts to the instance.
  [[nodiscard]] std::optional<Setting> setting() const;
  [[nodiscard]] MechanismFactory factory(Setting instance_setting) const;
};

/// Validates a combiner name against its roster and learner.
MechanismChoice make_choice(const std::optional<std::string>& mech, const std::optional<std::string>& combiner,
                            const std::optional<std::string>& roster, const std::optional<std::string>& learner,
                            std::optional<double> gamma);

}  // namespace truthsched::cli
