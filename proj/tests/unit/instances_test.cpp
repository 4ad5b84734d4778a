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

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "truthsched/instances.hpp"
#include "truthsched/lower_bounds.hpp"
#include "truthsched/runner.hpp"

namespace truthsched {
namespace {

using testing::ppf_c;
using testing::ppf_nc;

StochasticSpec small_spec(Setting setting) {
  StochasticSpec spec;
  spec.horizon = 60;
  spec.machines = 2;
  spec.bounds = Bounds{4.0, 3, 3};
  spec.setting = setting;
  spec.arrival_rate = 1.2;
  spec.values = {{1.0, 1.0}, {2.0, 1.0}, {4.0, 1.0}};
  spec.lengths = {{1, 1.0}, {3, 1.0}};
  spec.slack = {{0, 1.0}, {1, 1.0}};
  return spec;
}

TEST(Generators, DeterministicPerSeed) {
  for (Setting s : {Setting::clairvoyant, Setting::non_clairvoyant}) {
    EXPECT_EQ(gen_stochastic(small_spec(s), 4), gen_stochastic(small_spec(s), 4));
    EXPECT_NE(gen_stochastic(small_spec(s), 4), gen_stochastic(small_spec(s), 5));
  }
  EXPECT_EQ(gen_clairvoyant_lb(40, 2), gen_clairvoyant_lb(40, 2));
  const LossSequence losses(10, LossPair{0.3, 0.6});
  EXPECT_EQ(gen_nc_lb(losses, 8), gen_nc_lb(losses, 8));
  EXPECT_EQ(random_instance(RandomInstanceParams{}, 3), random_instance(RandomInstanceParams{}, 3));
}

TEST(Generators, StochasticOutputIsValid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (Setting s : {Setting::clairvoyant, Setting::non_clairvoyant}) {
      const Instance inst = gen_stochastic(small_spec(s), seed);
      EXPECT_TRUE(validate_instance(inst).empty());
      EXPECT_FALSE(inst.jobs.empty());
    }
  }
}

TEST(Generators, ZeroRateIsEmpty) {
  StochasticSpec spec = small_spec(Setting::non_clairvoyant);
  spec.arrival_rate = 0.0;
  EXPECT_TRUE(gen_stochastic(spec, 1).jobs.empty());
}

TEST(Generators, BadSpecRejected) {
  StochasticSpec spec = small_spec(Setting::clairvoyant);
  spec.values = {{5.0, 1.0}};
  EXPECT_THROW(validate_spec(spec), std::invalid_argument);
  spec = small_spec(Setting::clairvoyant);
  spec.lengths = {{1, -1.0}};
  EXPECT_THROW(validate_spec(spec), std::invalid_argument);
}

TEST(ClairvoyantLowerBound, PriceOneEarnsThreePerRound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = gen_clairvoyant_lb(200, seed);
    auto m = ppf_c(1.0);
    EXPECT_EQ(run_clairvoyant(*m, inst).total, 600.0);
  }
}

TEST(ClairvoyantLowerBound, PriceTwoEarnsTwoPlusTwoPerHeads) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = gen_clairvoyant_lb(200, seed);
    std::int64_t third_jobs = 0;
    for (const JobType& j : inst.jobs) third_jobs += j.id % 3 == 2 ? 1 : 0;
    auto m = ppf_c(2.0);
    EXPECT_EQ(run_clairvoyant(*m, inst).total, 400.0 + 2.0 * static_cast<double>(third_jobs));
  }
}

TEST(ClairvoyantLowerBound, BestMemberBeatsThreePerRoundBySqrtT) {
  const std::int64_t rounds = 10000;
  const int samples = 300;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Instance inst = gen_clairvoyant_lb(rounds, static_cast<std::uint64_t>(k));
    auto a = ppf_c(1.0);
    auto b = ppf_c(2.0);
    const double best = std::max(run_clairvoyant(*a, inst).total, run_clairvoyant(*b, inst).total);
    const double excess = best - 3.0 * static_cast<double>(rounds);
    sum += excess;
    sum_sq += excess * excess;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / (samples - 1));
  EXPECT_GT(mean, 0.3 * std::sqrt(static_cast<double>(rounds)));
  // The excess is max(0, S) for a simple random walk S over the rounds:
  // E[max(0, S_n)] = E|S_n| / 2 = n C(n, n/2) / 2^(n+1) for even n.
  const double n = static_cast<double>(rounds);
  const double exact =
      n * std::exp(std::lgamma(n + 1) - 2 * std::lgamma(n / 2 + 1) - (n + 1) * std::log(2.0));
  EXPECT_NEAR(mean, exact, 3.0 * se);
}

TEST(NonClairvoyantLowerBound, InteriorRoundStructure) {
  const LossSequence losses(6, LossPair{0.25, 0.75});
  const Instance inst = gen_nc_lb(losses, 3);
  EXPECT_EQ(inst.horizon, 48);
  EXPECT_EQ(inst.machines, 1);
  EXPECT_TRUE(validate_instance(inst).empty());
  for (std::int64_t i = 0; i < 6; ++i) {
    int count = 0;
    for (const JobType& j : inst.jobs) {
      if (nc_lb_round(j.id) != i) continue;
      ++count;
      EXPECT_EQ(j.deadline, 0);
      switch (nc_lb_job_set(j.id)) {
        case 0:
          EXPECT_EQ(j.arrival, 8 * i + 1);
          EXPECT_EQ(j.value, 1.0);
          EXPECT_TRUE(j.length == 6 || j.length == 8);
          break;
        case 1:
          EXPECT_EQ(j.arrival, 8 * i + 7);
          EXPECT_EQ(j.value, 3.0);
          EXPECT_EQ(j.length, 2);
          break;
        case 2:
          EXPECT_EQ(j.arrival, 8 * i - 2);
          EXPECT_EQ(j.value, 2.0);
          EXPECT_TRUE(j.length == 2 || j.length == 4);
          break;
        default:
          EXPECT_EQ(j.arrival, 8 * i);
          EXPECT_EQ(j.value, 3.0);
          EXPECT_EQ(j.length, 2);
      }
    }
    EXPECT_EQ(count, i == 0 ? 2 : 4);
  }
}

TEST(NonClairvoyantLowerBound, ExpectedRoundValuesByEnumeration) {
  for (double l1 : {0.0, 0.25, 0.5, 1.0}) {
    for (double l2 : {0.0, 0.25, 0.5, 1.0}) {
      const NcLbRoundValues v = nc_lb_expected_round_values(LossSequence(3, LossPair{l1, l2}));
      // Round 1 is interior: it has all four jobs and a successor round.
      EXPECT_EQ(v.price1[1], 10.0 - 2.0 * l1) << l1 << " " << l2;
      EXPECT_EQ(v.price2[1], 10.0 - 2.0 * l2) << l1 << " " << l2;
    }
  }
}

TEST(NonClairvoyantLowerBound, HandComputedPriceOneRounds) {
  // Price 1 serves the value-1 job and, when it runs 6 slots, the value-3
  // job that arrives as it finishes: 6 + 6 = 12, or 8 alone.
  auto m = ppf_nc(1.0);
  const Instance short_first = nc_lb_instance({{false, false}, {false, false}, {false, false}});
  const Instance long_first = nc_lb_instance({{true, false}, {true, false}, {true, false}});
  EXPECT_EQ(run_nonclairvoyant(*m, short_first).total, 36.0);
  EXPECT_EQ(run_nonclairvoyant(*m, long_first).total, 24.0);
}

TEST(NonClairvoyantLowerBound, SwitchingToPriceOneLosesSix) {
  const auto cases = nc_lb_switch_cases(4);
  ASSERT_FALSE(cases.empty());
  bool saw_completion = false;
  for (const NcLbSwitchCase& c : cases) {
    EXPECT_GE(c.loss, 6.0) << "round " << c.round << " slot " << c.slot;
    saw_completion = saw_completion || c.at_completion;
  }
  EXPECT_TRUE(saw_completion);
}

TEST(NonClairvoyantLowerBound, LongFirstFrequencyMatchesProbability) {
  const LossPair loss{0.4, 0.3};
  const std::size_t rounds = 10000;
  const Instance inst = gen_nc_lb(LossSequence(rounds, loss), 17);
  std::int64_t long_first = 0;
  std::int64_t long_third = 0;
  for (const JobType& j : inst.jobs) {
    if (nc_lb_job_set(j.id) == 0 && j.length == 8) ++long_first;
    if (nc_lb_job_set(j.id) == 2 && j.length == 4) ++long_third;
  }
  const double p1 = nc_lb_long_first_probability(loss);
  EXPECT_DOUBLE_EQ(p1, 0.7);
  const double n1 = static_cast<double>(rounds);
  EXPECT_NEAR(static_cast<double>(long_first) / n1, p1, 3.0 * std::sqrt(p1 * (1 - p1) / n1));
  const double p2 = nc_lb_long_third_probability(loss);
  const double n2 = static_cast<double>(rounds - 1);
  EXPECT_NEAR(static_cast<double>(long_third) / n2, p2, 3.0 * std::sqrt(p2 * (1 - p2) / n2));
}

TEST(NonClairvoyantLowerBound, LossesOutsideUnitIntervalRejected) {
  EXPECT_THROW(gen_nc_lb({{0.5, 1.5}}, 1), std::invalid_argument);
  EXPECT_THROW(gen_nc_lb({{-0.1, 0.5}}, 1), std::invalid_argument);
}

TEST(SyncingExample, StartingLateLosesTheLongJob) {
  const Slot T = 30;
  for (Setting s : {Setting::clairvoyant, Setting::non_clairvoyant}) {
    const Instance inst = gen_syncing_example(T, s);
    ASSERT_EQ(inst.jobs.size(), 3U);
    EXPECT_TRUE(validate_instance(inst).empty());
    const auto m = s == Setting::clairvoyant ? MechanismHandle(ppf_c(1.0)) : MechanismHandle(ppf_nc(1.0));
    EXPECT_EQ(run(m, inst).total, static_cast<double>(T - 1));
    EXPECT_EQ(run(m, inst, RunOptions{2, true}).total, 3.0);
  }
  EXPECT_THROW(gen_syncing_example(4), std::invalid_argument);
}

TEST(InstanceIo, RoundTrip) {
  std::vector<Instance> all{gen_stochastic(small_spec(Setting::clairvoyant), 1),
                            gen_stochastic(small_spec(Setting::non_clairvoyant), 2),
                            gen_clairvoyant_lb(20, 3), gen_nc_lb(LossSequence(5, {0.5, 0.5}), 4),
                            gen_syncing_example(9)};
  for (const Instance& inst : all) {
    std::stringstream buf;
    write_instance(inst, buf);
    EXPECT_EQ(read_instance(buf), inst);
  }
}

TEST(InstanceIo, JobBeforeHeader) {
  std::istringstream in(R"({"id":1,"a":1,"d":1,"l":1,"v":1})" "\n");
  try {
    read_instance(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(InstanceIo, MalformedLineReportsLineNumber) {
  std::istringstream in(R"({"T":5,"m":1,"v_max":1,"d_max":1,"l_max":1,"setting":"clairvoyant"})"
                        "\n"
                        R"({"id":1,"a":1,"d":1,"l":1,"v":1})"
                        "\n"
                        "{not json\n");
  try {
    read_instance(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(InstanceIo, ValueAboveBoundIsValidationError) {
  std::istringstream in(R"({"T":5,"m":1,"v_max":1,"d_max":1,"l_max":1,"setting":"clairvoyant"})"
                        "\n"
                        R"({"id":1,"a":1,"d":1,"l":1,"v":2})"
                        "\n");
  EXPECT_THROW(read_instance(in), ValidationError);
}

TEST(InstanceIo, LossFile) {
  std::istringstream in("# losses\n0.25 0.5\n\n1 0\n");
  const LossSequence losses = read_losses(in);
  ASSERT_EQ(losses.size(), 2U);
  EXPECT_EQ(losses[0], (LossPair{0.25, 0.5}));
  EXPECT_EQ(losses[1], (LossPair{1.0, 0.0}));
  std::istringstream bad("0.5\n");
  EXPECT_THROW(read_losses(bad), ParseError);
}

}  // namespace
}  // namespace truthsched
