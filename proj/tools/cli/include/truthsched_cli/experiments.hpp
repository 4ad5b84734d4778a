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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "truthsched/instances.hpp"
#include "truthsched_cli/descriptors.hpp"

namespace truthsched::cli {

/// Formats a number for CSV output: shortest round-trip form, so rows are
/// byte-identical across reruns and recomputable from the library.
std::string format_number(double v);

/// Default streams used by `gen --kind stochastic` and the experiments. On
/// the non-clairvoyant stream prices 1 and 4 earn within a few percent of
/// each other, with price 1 slightly ahead.
StochasticSpec default_stream(Setting setting, Slot horizon);

/// Where an instance comes from: a generator name or a file.
struct InstanceSource {
  std::string kind = "stochastic";  // stochastic, clb, nclb, syncing, desk or file
  std::filesystem::path path;       // file
  Setting setting = Setting::non_clairvoyant;
  LossSequence losses;              // nclb, cycled to the number of rounds
  std::optional<double> arrival_rate;
};

/// Builds the instance for one (T, seed) cell. Generators that fix their own
/// setting (clb, nclb) ignore `setting`.
Instance make_instance(const InstanceSource& source, Slot horizon, std::uint64_t seed);

struct RegretConfig {
  MechanismChoice choice;  // must be a combiner
  InstanceSource source;
  std::vector<Slot> horizons;
  std::vector<std::uint64_t> seeds;
  int benchmark_samples = 20;  // FTBS: restart coin sequences per member
};

struct RegretRow {
  Slot horizon = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;  // FTBS restart probability; 0 for FTS
  double combiner = 0.0;
  std::vector<double> members;  // FTS: W(A_i); FTBS: estimate of E[W(restarted A_i)]
  double best = 0.0;            // best member (FTS) or OPT-bar (FTBS)
  double regret = 0.0;          // best - combiner
  std::int64_t switches = 0;
  std::int64_t restarts = 0;
};

/// Per-cell seeds: the instance uses derive_seed(seed, 0), the combiner
/// derive_seed(seed, 1) and the benchmark derive_seed(seed, 2).
RegretRow regret_cell(const RegretConfig& cfg, Slot horizon, std::uint64_t seed);
/// Every (T, seed) cell, sorted by T then seed.
std::vector<RegretRow> regret_rows(const RegretConfig& cfg);
void write_regret_csv(const RegretConfig& cfg, const std::vector<RegretRow>& rows, std::ostream& out);

/// Mean regret per horizon and the least-squares slope of log(mean regret)
/// against log(T). Empty slope when some mean is not positive.
struct ScalingFit {
  std::vector<Slot> horizons;
  std::vector<double> mean_regret;
  std::optional<double> slope;
};

ScalingFit fit_scaling(const std::vector<RegretRow>& rows);

/// One named check of a lower-bound construction.
struct LbCheck {
  std::string name;
  std::string params;
  double expected = 0.0;
  double observed = 0.0;
  bool ok = false;
};

/// Exact enumeration of the non-clairvoyant lower bound: expected interior
/// round values at prices 1 and 2 for every loss pair drawn from
/// {0, 0.25, 0.5, 1}, and the minimum loss of a switch from price 2 to
/// price 1 (which must be at least 6).
std::vector<LbCheck> verify_nc_lower_bound();
/// The clairvoyant lower bound over the given seeds: price 1 earns exactly 3
/// per round, price 2 earns 2 plus 2 per third job, and the average
/// per-round value of price 2 is within 3 standard errors of 3.
std::vector<LbCheck> verify_clairvoyant_lower_bound(std::int64_t rounds, const std::vector<std::uint64_t>& seeds);
void write_lb_csv(const std::vector<LbCheck>& checks, std::ostream& out);

struct TruthcheckConfig {
  MechanismChoice choice;
  std::vector<Instance> corpus;
  CheckOptions options;
  bool truthful = true;
  bool order_respecting = true;
};

/// Runs the requested checks over the corpus, sharing the rerun budget.
CheckReport run_truthcheck(const TruthcheckConfig& cfg);
void write_violations_csv(const CheckReport& report, std::ostream& out);

}  // namespace truthsched::cli
