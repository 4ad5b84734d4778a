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

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"
#include "truthsched/combiners.hpp"
#include "truthsched/instances.hpp"
#include "truthsched/switching.hpp"
#include "truthsched/truthcheck.hpp"

namespace truthsched {
namespace {

using testing::ppf_c;
using testing::ppf_nc;

constexpr int kCorpus = 12;

CheckReport check_all(const MechanismFactory& factory, Setting setting, std::vector<std::uint64_t> seeds = {0}) {
  CheckOptions opts;
  opts.seeds = std::move(seeds);
  CheckReport report;
  for (const Instance& inst : desk_corpus(setting, kCorpus, 2026)) {
    report.merge(check_truthful(factory, inst, opts));
    report.merge(check_order_respecting(factory, inst, opts));
  }
  return report;
}

std::string describe(const CheckReport& r) {
  if (r.violations.empty()) return "none";
  const Violation& v = r.violations.front();
  return v.check + " job " + std::to_string(v.job) + ": " + v.detail;
}

TEST(Misreports, NeverEarlierAndExcludeTruth) {
  const Instance inst = desk_corpus(Setting::clairvoyant, 1, 5).front();
  ASSERT_FALSE(inst.jobs.empty());
  const JobType& truth = inst.jobs.front();
  const auto lies = misreports(truth, inst, MisreportGrid{});
  EXPECT_FALSE(lies.empty());
  for (const JobType& r : lies) {
    EXPECT_NE(r, truth);
    EXPECT_GE(r.arrival, truth.arrival);
    EXPECT_LE(r.arrival, truth.arrival + 2);
    EXPECT_LE(r.deadline - r.arrival + 1, inst.bounds.d_max);
    EXPECT_LE(r.deadline, inst.horizon);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, inst.bounds.v_max);
  }
  const auto has_value = [&](double v) {
    return std::any_of(lies.begin(), lies.end(), [v](const JobType& r) { return r.value == v; });
  };
  for (double v : {0.0, 1.0, 2.0, 3.0, 4.0}) EXPECT_TRUE(has_value(v)) << v;
}

TEST(Misreports, NonClairvoyantKeepsLength) {
  const Instance inst = desk_corpus(Setting::non_clairvoyant, 1, 5).front();
  const JobType& truth = inst.jobs.front();
  for (const JobType& r : misreports(truth, inst, MisreportGrid{})) {
    EXPECT_EQ(r.length, truth.length);
    EXPECT_LE(r.deadline, inst.bounds.d_max);
  }
}

TEST(Truthcheck, PostedPriceClairvoyantHasNoViolations) {
  for (Value p : {1.0, 2.0}) {
    const auto r = check_all([p](std::uint64_t) { return MechanismHandle(ppf_c(p)); }, Setting::clairvoyant);
    EXPECT_TRUE(r.violations.empty()) << describe(r);
    EXPECT_FALSE(r.partial);
    EXPECT_GT(r.reruns, 0);
  }
}

TEST(Truthcheck, PostedPriceNonClairvoyantHasNoViolations) {
  for (Value p : {1.0, 2.0}) {
    const auto r = check_all([p](std::uint64_t) { return MechanismHandle(ppf_nc(p)); }, Setting::non_clairvoyant);
    EXPECT_TRUE(r.violations.empty()) << describe(r);
  }
}

TEST(Truthcheck, ClairvoyantSwitchAndChainHaveNoViolations) {
  const auto single = check_all(
      [](std::uint64_t) { return MechanismHandle(switch_clairvoyant(ppf_c(1.0), ppf_c(3.0), 6)); },
      Setting::clairvoyant);
  EXPECT_TRUE(single.violations.empty()) << describe(single);
  const auto chain = check_all(
      [](std::uint64_t) {
        return MechanismHandle(compose_chain(SwitchPlan{{ppf_c(2.0), ppf_c(1.0), ppf_c(3.0), ppf_c(1.0)}, {3, 7, 12}}));
      },
      Setting::clairvoyant);
  EXPECT_TRUE(chain.violations.empty()) << describe(chain);
}

TEST(Truthcheck, RestartsAndNonClairvoyantSwitchHaveNoViolations) {
  const auto restarted = check_all(
      [](std::uint64_t) { return MechanismHandle(restart(ppf_nc(1.0), {4, 11})); }, Setting::non_clairvoyant);
  EXPECT_TRUE(restarted.violations.empty()) << describe(restarted);
  const auto random = check_all(
      [](std::uint64_t seed) { return MechanismHandle(with_random_restarts(ppf_nc(2.0), RestartConfig{0.2, seed})); },
      Setting::non_clairvoyant, {1, 2});
  EXPECT_TRUE(random.violations.empty()) << describe(random);
  const auto switched = check_all(
      [](std::uint64_t) { return MechanismHandle(switch_nonclairvoyant(ppf_nc(3.0), ppf_nc(1.0), 5)); },
      Setting::non_clairvoyant);
  EXPECT_TRUE(switched.violations.empty()) << describe(switched);
}

TEST(Truthcheck, CombinersHaveNoViolationsPerCoinSeed) {
  const auto fts = check_all(
      [](std::uint64_t seed) {
        return MechanismHandle(make_handle<Fts>(std::vector<ClairvoyantHandle>{ppf_c(1.0), ppf_c(3.0)},
                                                FtsConfig{1.0, 0.5, seed}));
      },
      Setting::clairvoyant, {3, 4});
  EXPECT_TRUE(fts.violations.empty()) << describe(fts);
  const auto ftbs = check_all(
      [](std::uint64_t seed) {
        return MechanismHandle(make_handle<Ftbs>(std::vector<NonClairvoyantHandle>{ppf_nc(1.0), ppf_nc(3.0)},
                                                 FtbsConfig{0.25, seed, {}}));
      },
      Setting::non_clairvoyant, {3, 4});
  EXPECT_TRUE(ftbs.violations.empty()) << describe(ftbs);
}

TEST(Truthcheck, FirstPriceIsCaughtAndReplays) {
  const MechanismFactory factory = [](std::uint64_t) {
    return MechanismHandle(make_handle<FirstPriceClairvoyant>());
  };
  const auto r = check_all(factory, Setting::clairvoyant);
  ASSERT_FALSE(r.violations.empty());
  const Violation& v = r.violations.front();
  EXPECT_EQ(v.check, "truthful");
  EXPECT_GT(v.utility_lie, v.utility_truth);
  EXPECT_LT(v.report.value, v.truth.value);
  EXPECT_TRUE(replay_violation(factory, v));
  Violation tampered = v;
  tampered.utility_lie += 1.0;
  EXPECT_FALSE(replay_violation(factory, tampered));
}

TEST(Truthcheck, RepricingIsNotOrderRespecting) {
  const MechanismFactory factory = [](std::uint64_t) {
    return MechanismHandle(make_handle<RepricingNonClairvoyant>(1.0));
  };
  CheckReport r;
  for (const Instance& inst : desk_corpus(Setting::non_clairvoyant, kCorpus, 2026)) {
    r.merge(check_order_respecting(factory, inst, CheckOptions{}));
  }
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().check, "order-respecting");
}

TEST(Truthcheck, BudgetStopsEarly) {
  const Instance inst = desk_corpus(Setting::clairvoyant, 1, 9).front();
  CheckOptions opts;
  opts.budget = 5;
  const auto r = check_truthful([](std::uint64_t) { return MechanismHandle(ppf_c(1.0)); }, inst, opts);
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.reruns, 5);
}

CoinTrace trace_of(const FtbsConfig& cfg, const Instance& inst) {
  Ftbs ftbs({ppf_nc(1.0), ppf_nc(3.0)}, cfg);
  run_nonclairvoyant(ftbs, inst);
  return coin_trace(ftbs);
}

Instance nc_stream(std::uint64_t seed) {
  StochasticSpec spec;
  spec.horizon = 300;
  spec.bounds = Bounds{3.0, 2, 3};
  spec.setting = Setting::non_clairvoyant;
  spec.arrival_rate = 0.8;
  spec.values = {{1.0, 1.0}, {3.0, 1.0}};
  spec.lengths = {{1, 1.0}, {3, 1.0}};
  spec.slack = {{0, 1.0}, {2, 1.0}};
  return gen_stochastic(spec, seed);
}

TEST(ReportIndependence, FtbsCoinsIgnoreReports) {
  const Instance inst = nc_stream(4);
  const FtbsConfig cfg{0.05, 8, {}};
  const CoinTrace original = trace_of(cfg, inst);
  ASSERT_FALSE(original.heads.empty());
  Instance zeroed = inst;
  for (JobType& j : zeroed.jobs) j.value = 0.0;
  EXPECT_EQ(check_restart_report_independence(original, trace_of(cfg, zeroed)), "");
  for (std::size_t k = 0; k < inst.jobs.size(); k += 17) {
    Instance altered = inst;
    altered.jobs[k].value = inst.bounds.v_max - altered.jobs[k].value;
    altered.jobs[k].deadline = inst.bounds.d_max - altered.jobs[k].deadline;
    EXPECT_EQ(check_restart_report_independence(original, trace_of(cfg, altered)), "") << "job " << k;
  }
}

TEST(ReportIndependence, RestartWrapperCoinsIgnoreReports) {
  const Instance inst = nc_stream(5);
  auto trace = [](const Instance& i) {
    ResyncMechanism m(ppf_nc(2.0));
    m.set_random_restarts(RestartConfig{0.05, 3});
    run_nonclairvoyant(m, i);
    return coin_trace(m);
  };
  Instance zeroed = inst;
  for (JobType& j : zeroed.jobs) j.value = 0.0;
  EXPECT_EQ(check_restart_report_independence(trace(inst), trace(zeroed)), "");
}

TEST(ReportIndependence, ReportHashingCoinsAreCaught) {
  const Instance inst = nc_stream(4);
  const FtbsConfig cfg{0.05, 8, report_hash_coins(0.05, 8)};
  const CoinTrace original = trace_of(cfg, inst);
  Instance zeroed = inst;
  for (JobType& j : zeroed.jobs) j.value = 0.0;
  const std::string diff = check_restart_report_independence(original, trace_of(cfg, zeroed));
  EXPECT_NE(diff, "");
}

}  // namespace
}  // namespace truthsched
