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
#include <cmath>

#include "test_support.hpp"
#include "truthsched/combiners.hpp"
#include "truthsched/instances.hpp"
#include "truthsched/runner.hpp"

namespace truthsched {
namespace {

using testing::ppf_c;
using testing::ppf_nc;

Instance clairvoyant_stream(Slot horizon, std::uint64_t seed) {
  StochasticSpec spec;
  spec.horizon = horizon;
  spec.machines = 2;
  spec.bounds = Bounds{4.0, 4, 3};
  spec.setting = Setting::clairvoyant;
  spec.arrival_rate = 1.5;
  spec.values = {{1.0, 2.0}, {2.5, 1.0}, {4.0, 0.5}};
  spec.lengths = {{1, 2.0}, {2, 1.0}, {3, 0.5}};
  spec.slack = {{0, 1.0}, {1, 1.0}};
  return gen_stochastic(spec, seed);
}

Instance nc_stream(Slot horizon, std::uint64_t seed) {
  StochasticSpec spec;
  spec.horizon = horizon;
  spec.machines = 1;
  spec.bounds = Bounds{3.0, 2, 3};
  spec.setting = Setting::non_clairvoyant;
  spec.arrival_rate = 0.7;
  spec.values = {{1.0, 1.0}, {3.0, 1.0}};
  spec.lengths = {{1, 1.0}, {3, 1.0}};
  spec.slack = {{0, 1.0}, {2, 1.0}};
  return gen_stochastic(spec, seed);
}

TEST(Fts, SingleMemberMatchesStandalone) {
  const Instance inst = clairvoyant_stream(80, 3);
  Fts fts({ppf_c(2.0)}, FtsConfig{std::nullopt, std::nullopt, 1});
  const RunResult combined = run_clairvoyant(fts, inst);
  auto alone = ppf_c(2.0);
  const RunResult standalone = run_clairvoyant(*alone, inst);
  EXPECT_EQ(combined.allocation, standalone.allocation);
  EXPECT_EQ(combined.total, standalone.total);
  EXPECT_TRUE(fts.log().switch_slots.empty());
}

TEST(Fts, HugeSwitchingCostNeverSwitches) {
  const Instance inst = clairvoyant_stream(120, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Fts fts({ppf_c(1.0), ppf_c(3.0)}, FtsConfig{1e300, std::nullopt, seed});
    const RunResult combined = run_clairvoyant(fts, inst);
    EXPECT_TRUE(fts.log().switch_slots.empty());
    const int first = fts.log().choices.front();
    auto alone = first == 0 ? ppf_c(1.0) : ppf_c(3.0);
    EXPECT_EQ(combined.allocation, run_clairvoyant(*alone, inst).allocation);
  }
}

TEST(Fts, DefaultSwitchingCost) {
  const Instance inst = clairvoyant_stream(10, 1);
  Fts fts({ppf_c(1.0), ppf_c(2.0)}, FtsConfig{});
  fts.reset(inst.environment());
  EXPECT_EQ(fts.switching_cost(), 2.0 * 4.0 * 4.0 * 2.0);
}

TEST(Fts, RewardsMatchStandaloneWelfare) {
  const Instance inst = clairvoyant_stream(150, 7);
  const std::vector<Value> prices{1.0, 2.0, 3.0};
  std::vector<WelfareSeries> oracle;
  for (Value p : prices) {
    auto m = ppf_c(p);
    oracle.push_back(run_clairvoyant(*m, inst).welfare);
  }
  Fts fts({ppf_c(1.0), ppf_c(2.0), ppf_c(3.0)}, FtsConfig{1.0, std::nullopt, 5});
  run_clairvoyant(fts, inst);
  const auto& rewards = fts.log().rewards;
  ASSERT_EQ(static_cast<Slot>(rewards.size()), inst.horizon);
  for (Slot t = 2; t <= inst.horizon; ++t) {
    const auto& r = rewards[static_cast<std::size_t>(t - 1)];
    ASSERT_EQ(r.size(), prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) {
      EXPECT_EQ(r[i], oracle[i].at(t - 1)) << "slot " << t << " member " << i;
    }
  }
}

TEST(Fts, WelfareAtLeastChosenMembersMinusSwitchingCost) {
  std::int64_t switches = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = seed % 2 == 0 ? clairvoyant_stream(100, seed) : gen_clairvoyant_lb(60, seed);
    Fts fts({ppf_c(1.0), ppf_c(2.0)}, FtsConfig{std::nullopt, 0.5, seed});
    const RunResult combined = run_clairvoyant(fts, inst);
    const RunLog& log = fts.log();
    double followed = 0.0;
    for (Slot t = 1; t <= inst.horizon; ++t) {
      const int i = log.choices[static_cast<std::size_t>(t - 1)];
      followed += log.member_welfare[static_cast<std::size_t>(i)].at(t);
    }
    const auto n_switch = static_cast<double>(log.switch_slots.size());
    switches += static_cast<std::int64_t>(log.switch_slots.size());
    EXPECT_GE(combined.total, followed - fts.switching_cost() * n_switch) << "seed " << seed;
  }
  EXPECT_GT(switches, 0);
}

TEST(BatchRewards, SyncPrefixIsZero) {
  WelfareSeries w(30);
  for (Slot t = 1; t <= 30; ++t) w.add(t, 1.0);
  const BatchRewards b = batch_rewards(w, 5, 20, 6);
  ASSERT_EQ(b.per_slot.size(), 15U);
  for (Slot x = 5; x <= 11; ++x) EXPECT_EQ(b.per_slot[static_cast<std::size_t>(x - 5)], 0.0);
  for (Slot x = 12; x <= 19; ++x) EXPECT_EQ(b.per_slot[static_cast<std::size_t>(x - 5)], 1.0);
  EXPECT_EQ(b.total, 8.0);
}

TEST(BatchRewards, ShortBatchAndZeroWelfare) {
  WelfareSeries w(30);
  for (Slot t = 1; t <= 30; ++t) w.add(t, 2.0);
  EXPECT_EQ(batch_rewards(w, 5, 11, 6).total, 0.0);
  EXPECT_EQ(batch_rewards(w, 5, 12, 6).total, 0.0);
  EXPECT_EQ(batch_rewards(WelfareSeries(30), 1, 30, 2).total, 0.0);
  EXPECT_THROW(batch_rewards(w, 5, 5, 2), std::invalid_argument);
}

TEST(Ftbs, ZeroGammaMatchesInitialArm) {
  const Instance inst = nc_stream(200, 2);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Ftbs ftbs({ppf_nc(1.0), ppf_nc(3.0)}, FtbsConfig{0.0, seed, {}});
    const RunResult combined = run_nonclairvoyant(ftbs, inst);
    EXPECT_TRUE(ftbs.log().heads.empty());
    EXPECT_TRUE(ftbs.log().switch_slots.empty());
    EXPECT_TRUE(ftbs.log().restart_slots.empty());
    const int arm = ftbs.log().choices.front();
    auto alone = arm == 0 ? ppf_nc(1.0) : ppf_nc(3.0);
    const RunResult standalone = run_nonclairvoyant(*alone, inst);
    EXPECT_EQ(combined.allocation, standalone.allocation);
  }
}

TEST(Ftbs, UnchangedArmRestartsAtHeads) {
  const Instance inst = nc_stream(400, 5);
  Ftbs ftbs({ppf_nc(1.0)}, FtbsConfig{0.03, 11, {}});
  run_nonclairvoyant(ftbs, inst);
  const RunLog& log = ftbs.log();
  ASSERT_FALSE(log.heads.empty());
  EXPECT_EQ(log.restart_slots, log.heads);
  EXPECT_TRUE(log.switch_slots.empty());
  const auto& windows = ftbs.core().windows();
  for (Slot h : log.heads) {
    const bool opens = std::any_of(windows.begin(), windows.end(),
                                   [h](const WindowEvent& w) { return w.start == h; });
    const bool inside_open = std::any_of(windows.begin(), windows.end(),
                                         [h](const WindowEvent& w) { return w.start < h && h <= w.end; });
    EXPECT_TRUE(opens != inside_open) << "heads at " << h;
  }
}

TEST(Ftbs, SwitchesOnlyAtHeads) {
  const Instance inst = nc_stream(600, 6);
  Ftbs ftbs({ppf_nc(1.0), ppf_nc(3.0)}, FtbsConfig{0.05, 3, {}});
  run_nonclairvoyant(ftbs, inst);
  const RunLog& log = ftbs.log();
  std::vector<Slot> events = log.switch_slots;
  events.insert(events.end(), log.restart_slots.begin(), log.restart_slots.end());
  std::sort(events.begin(), events.end());
  EXPECT_EQ(events, log.heads);
  EXPECT_FALSE(log.switch_slots.empty());
}

TEST(Ftbs, BatchRewardsMatchRecomputation) {
  const Instance inst = nc_stream(500, 8);
  Ftbs ftbs({ppf_nc(1.0), ppf_nc(3.0)}, FtbsConfig{0.04, 9, {}});
  const RunResult result = run_nonclairvoyant(ftbs, inst);
  const RunLog& log = ftbs.log();
  // With truthful reports the combiner's running value equals realized welfare.
  for (Slot x = 1; x <= result.welfare.last_slot(); ++x) {
    ASSERT_EQ(log.own_welfare.at(x), result.welfare.at(x)) << "slot " << x;
  }
  ASSERT_FALSE(log.batches.empty());
  Slot prev = 1;
  const Slot w = inst.environment().sync_window();
  for (const BatchRecord& b : log.batches) {
    EXPECT_EQ(b.from, prev);
    double total = 0.0;
    for (Slot x = b.from; x <= b.to; ++x) total += x <= b.from + w ? 0.0 : result.welfare.at(x);
    EXPECT_EQ(b.reward, total);
    EXPECT_EQ(b.arm, log.choices[static_cast<std::size_t>(b.to - 1)]);
    prev = b.to + 1;
  }
}

TEST(Ftbs, DefaultGammaFormula) {
  Environment env;
  env.horizon = 1000;
  env.machines = 1;
  env.bounds = Bounds{1.0, 2, 6};
  env.setting = Setting::non_clairvoyant;
  const double expected = std::pow(8.0, -2.0 / 3.0) * std::pow(1000.0, -1.0 / 3.0) * std::cbrt(2.0 * std::log(2.0));
  EXPECT_NEAR(ftbs_default_gamma(env, 2), expected, 1e-15);
  EXPECT_EQ(ftbs_default_gamma(env, 1), 1e-12);
}

TEST(RestartBenchmark, ZeroGammaIsExactMaximum) {
  const Instance inst = nc_stream(150, 12);
  const std::vector<NonClairvoyantHandle> roster{ppf_nc(1.0), ppf_nc(3.0)};
  const BenchmarkEstimate est = restart_benchmark(roster, 0.0, inst, 5, 1);
  double best = 0.0;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    auto m = roster[i];
    const double w = run_nonclairvoyant(*m, inst).total;
    EXPECT_EQ(est.members[i].mean, w);
    EXPECT_EQ(est.members[i].standard_error, 0.0);
    best = std::max(best, w);
  }
  EXPECT_EQ(est.opt_bar, best);
}

TEST(RestartBenchmark, BackToBackRestartsNeverHelp) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = nc_stream(100, seed);
    const std::vector<NonClairvoyantHandle> roster{ppf_nc(1.0), ppf_nc(3.0)};
    const BenchmarkEstimate calm = restart_benchmark(roster, 0.0, inst, 1, seed);
    const BenchmarkEstimate busy = restart_benchmark(roster, 1.0, inst, 1, seed);
    for (std::size_t i = 0; i < roster.size(); ++i) {
      EXPECT_LE(busy.members[i].mean, calm.members[i].mean) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace truthsched
