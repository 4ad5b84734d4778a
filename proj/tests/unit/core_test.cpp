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
#include "truthsched/allocation.hpp"
#include "truthsched/types.hpp"

namespace truthsched {
namespace {

using testing::clairvoyant_instance;
using testing::nc_instance;

Instance one_job(JobType j) { return clairvoyant_instance(10, 1, Bounds{10.0, 5, 4}, {j}); }

TEST(ServedJobs, EmptyAllocationServesNobody) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 5.0});
  EXPECT_TRUE(served_jobs(Allocation{}, inst).empty());
}

TEST(ServedJobs, RequirementMetExactly) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 5.0});
  Allocation a;
  a.set(1, JobOutcome{{Unit{1, 0}, Unit{2, 0}}, 0.0});
  EXPECT_EQ(served_jobs(a, inst), std::set<JobId>{1});
}

TEST(ServedJobs, TooFewSlotsInWindow) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 5.0});
  Allocation a;
  a.set(1, JobOutcome{{Unit{1, 0}}, 0.0});
  EXPECT_TRUE(served_jobs(a, inst).empty());
}

TEST(ServedJobs, SlotsOutsideWindowDoNotCount) {
  const Instance inst = one_job(JobType{1, 2, 3, 2, 5.0});
  Allocation a;
  a.set(1, JobOutcome{{Unit{3, 0}, Unit{4, 0}}, 0.0});
  EXPECT_TRUE(served_jobs(a, inst).empty());
}

TEST(ServedJobs, InfeasibleAllocationNamesSlot) {
  const Instance inst = clairvoyant_instance(10, 1, Bounds{10.0, 5, 4},
                                             {JobType{1, 1, 3, 1, 1.0}, JobType{2, 1, 3, 1, 1.0}});
  Allocation a;
  a.set(1, JobOutcome{{Unit{2, 0}}, 0.0});
  a.set(2, JobOutcome{{Unit{2, 0}}, 0.0});
  try {
    served_jobs(a, inst);
    FAIL() << "expected a feasibility error";
  } catch (const FeasibilityError& e) {
    EXPECT_EQ(e.slot(), 2);
  }
}

TEST(ServedJobs, OverfullSlotAcrossMachinesIsInfeasible) {
  Allocation a;
  a.set(1, JobOutcome{{Unit{4, 0}}, 0.0});
  a.set(2, JobOutcome{{Unit{4, 1}}, 0.0});
  EXPECT_THROW(a.check_feasible(1), FeasibilityError);
  EXPECT_NO_THROW(a.check_feasible(2));
}

TEST(ServedJobs, MonotoneInAddedWindowSlots) {
  const Instance inst = one_job(JobType{1, 1, 4, 2, 5.0});
  Allocation a;
  a.set(1, JobOutcome{{Unit{1, 0}, Unit{3, 0}}, 0.0});
  ASSERT_EQ(served_jobs(a, inst).size(), 1U);
  a.set(1, JobOutcome{{Unit{1, 0}, Unit{3, 0}, Unit{4, 0}}, 0.0});
  EXPECT_EQ(served_jobs(a, inst).size(), 1U);
}

TEST(ServedJobs, NonClairvoyantNeedsConsecutiveRunOnOneMachine) {
  const Instance inst = nc_instance(10, 2, Bounds{10.0, 2, 4}, {JobType{1, 2, 1, 2, 1.0}});
  Allocation ok;
  ok.set(1, JobOutcome{{Unit{3, 1}, Unit{4, 1}}, 0.0});
  EXPECT_EQ(served_jobs(ok, inst).size(), 1U);
  Allocation late;  // latest start is 2 + 1 = 3
  late.set(1, JobOutcome{{Unit{4, 0}, Unit{5, 0}}, 0.0});
  EXPECT_TRUE(served_jobs(late, inst).empty());
  Allocation split;
  split.set(1, JobOutcome{{Unit{2, 0}, Unit{3, 1}}, 0.0});
  EXPECT_TRUE(served_jobs(split, inst).empty());
}

TEST(Welfare, NoJobsIsZero) {
  const Instance inst = clairvoyant_instance(5, 1, Bounds{}, {});
  EXPECT_EQ(total_welfare(Allocation{}, inst), 0.0);
}

TEST(Welfare, OneServedJobIsValueTimesLength) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 5.0});
  Allocation a;
  a.set(1, JobOutcome{{Unit{1, 0}, Unit{2, 0}}, 0.0});
  EXPECT_EQ(total_welfare(a, inst), 10.0);
  const WelfareSeries w = welfare_series(a, inst);
  EXPECT_EQ(w.at(1), 5.0);
  EXPECT_EQ(w.at(2), 5.0);
  EXPECT_EQ(w.at(3), 0.0);
  EXPECT_EQ(w.total(), 10.0);
}

TEST(Welfare, SeriesDecomposesTotal) {
  const Instance inst = clairvoyant_instance(
      8, 2, Bounds{4.0, 4, 3},
      {JobType{1, 1, 4, 3, 1.5}, JobType{2, 2, 3, 2, 4.0}, JobType{3, 5, 8, 2, 0.25}});
  Allocation a;
  a.set(1, JobOutcome{{Unit{1, 0}, Unit{2, 1}, Unit{4, 0}}, 0.0});
  a.set(2, JobOutcome{{Unit{2, 0}, Unit{3, 0}}, 0.0});
  a.set(3, JobOutcome{{Unit{8, 0}}, 0.0});  // not served: one unit of two
  const double expected = 1.5 * 3 + 4.0 * 2;
  EXPECT_NEAR(total_welfare(a, inst), expected, kValueTolerance);
  EXPECT_NEAR(welfare_series(a, inst).total(), expected, kValueTolerance);
}

TEST(Utility, ServedPaysPerUnitPrice) {
  const JobType truth{1, 1, 3, 2, 5.0};
  const JobOutcome o{{Unit{1, 0}, Unit{2, 0}}, 3.0 * 2};
  EXPECT_EQ(utility(truth, Setting::clairvoyant, o), 4.0);
}

TEST(Utility, RejectedWithoutPaymentIsZero) {
  EXPECT_EQ(utility(JobType{1, 1, 3, 2, 5.0}, Setting::clairvoyant, JobOutcome{}), 0.0);
}

TEST(Utility, ServedOutsideTrueWindowStillPays) {
  const JobType truth{1, 1, 2, 2, 5.0};
  const JobOutcome o{{Unit{3, 0}, Unit{4, 0}}, 6.0};
  EXPECT_EQ(utility(truth, Setting::clairvoyant, o), -6.0);
}

TEST(Validate, WellFormedInstanceIsOk) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 5.0});
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Validate, ValueAboveBound) {
  const Instance inst = one_job(JobType{1, 1, 3, 2, 11.0});
  const auto v = validate_instance(inst);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_NE(v[0].find("value exceeds v_max"), std::string::npos);
}

TEST(Validate, DuplicateIds) {
  const Instance inst = clairvoyant_instance(10, 1, Bounds{10.0, 5, 4},
                                             {JobType{1, 1, 3, 2, 1.0}, JobType{1, 2, 3, 1, 1.0}});
  const auto v = validate_instance(inst);
  EXPECT_NE(std::find(v.begin(), v.end(), "ids not unique"), v.end());
}

TEST(Validate, ListsEveryViolation) {
  const Instance inst = clairvoyant_instance(
      10, 1, Bounds{10.0, 3, 2}, {JobType{1, 2, 1, 3, 1.0}, JobType{2, 4, 9, 1, 1.0}});
  const auto v = validate_instance(inst);
  auto has = [&v](const std::string& what) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(what) != std::string::npos; });
  };
  EXPECT_TRUE(has("length exceeds l_max"));
  EXPECT_TRUE(has("deadline before arrival"));
  EXPECT_TRUE(has("window exceeds d_max"));
  EXPECT_THROW(require_valid(inst), ValidationError);
}

TEST(Validate, NonClairvoyantWaitBudget) {
  const Instance inst = nc_instance(10, 1, Bounds{10.0, 2, 4}, {JobType{1, 1, 3, 1, 1.0}});
  const auto v = validate_instance(inst);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_NE(v[0].find("wait budget exceeds d_max"), std::string::npos);
}

TEST(OrderKey, TiesBrokenById) {
  const JobType a{5, 3, 3, 1, 1.0};
  const JobType b{2, 3, 3, 1, 1.0};
  EXPECT_TRUE(arrives_before(b, a));
  EXPECT_FALSE(arrives_before(a, b));
}

TEST(SettingNames, RoundTrip) {
  EXPECT_EQ(parse_setting(to_string(Setting::clairvoyant)), Setting::clairvoyant);
  EXPECT_EQ(parse_setting(to_string(Setting::non_clairvoyant)), Setting::non_clairvoyant);
  EXPECT_THROW(parse_setting("sometimes"), std::invalid_argument);
}

}  // namespace
}  // namespace truthsched
