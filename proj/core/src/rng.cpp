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

#include "truthsched/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace truthsched {

double exponential(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
  return -std::log(uniform01(rng)) / rate;
}

CoinSource::CoinSource(double gamma, std::uint64_t seed) : gamma_(gamma), seed_(seed) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
}

bool CoinSource::heads(std::int64_t slot) const {
  if (gamma_ <= 0.0) return false;
  if (gamma_ >= 1.0) return true;
  return to_unit_open(derive_seed(seed_, static_cast<std::uint64_t>(slot))) < gamma_;
}

}  // namespace truthsched
