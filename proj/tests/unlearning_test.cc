// Copyright 2026 The clustered-fu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfu/unlearning.h"

#include <map>
#include <vector>

#include "cfu/analysis.h"
#include "cfu/cohort.h"
#include "cfu/rng.h"
#include "cfu/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cfu {
namespace {

using ::testing::HasSubstr;

// s clusters of k consecutive user ids.
ClusterAssignment Blocks(int s, int k) {
  ClusterAssignment a;
  a.members.resize(s);
  for (UserId u = 0; u < s * k; ++u) {
    a.cluster_of.push_back(u / k);
    a.members[u / k].push_back(u);
  }
  return a;
}

ClusterPlanParams Plan(int s, int k, int q, int64_t tau_seq, int64_t tau_bat) {
  ClusterPlanParams plan;
  plan.cluster_size = k;
  plan.n_clusters = s;
  plan.shamir_threshold = (k + 1) / 2;
  plan.max_unlearn_per_cluster = q;
  plan.capacity_seq = tau_seq;
  plan.capacity_bat = tau_bat;
  return plan;
}

TEST(UnlearningTest, SequentialShrinksOneCluster) {
  UnlearnState st = *UnlearnState::Create(Plan(3, 60, 6, 22, 0), Blocks(3, 60),
                                          UnlearnMode::kSequential);
  absl::StatusOr<RetrainJob> first = st.ProcessSequential(5);
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(first->cluster_id, 0);
  EXPECT_EQ(first->users_retrained(), 59);
  EXPECT_EQ(st.ProcessSequential(7)->users_retrained(), 58);
  EXPECT_EQ(st.removed_per_cluster(), (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(st.requests_consumed(), 2);
}

TEST(UnlearningTest, SequentialErrors) {
  UnlearnState st = *UnlearnState::Create(Plan(2, 5, 1, 3, 0), Blocks(2, 5),
                                          UnlearnMode::kSequential);
  EXPECT_TRUE(
      IsKind(st.ProcessSequential(10).status(), ErrorKind::kUnknownUser));
  ASSERT_TRUE(st.ProcessSequential(0).ok());
  EXPECT_TRUE(
      IsKind(st.ProcessSequential(0).status(), ErrorKind::kAlreadyUnlearned));
  EXPECT_EQ(st.requests_consumed(), 1);
  // A budget rejection still uses up one request of capacity.
  EXPECT_TRUE(IsKind(st.ProcessSequential(1).status(),
                     ErrorKind::kPerClusterBudgetExceeded));
  EXPECT_EQ(st.requests_consumed(), 2);
  EXPECT_FALSE(st.is_unlearned(1));
  ASSERT_TRUE(st.ProcessSequential(6).ok());
  EXPECT_TRUE(IsKind(st.ProcessSequential(7).status(),
                     ErrorKind::kCapacityExhausted));
  EXPECT_LE(ComputeRetrainedStatistics(st).max_q, 1);
}

TEST(UnlearningTest, BatchSharesRetraining) {
  UnlearnState st = *UnlearnState::Create(Plan(3, 10, 2, 0, 5), Blocks(3, 10),
                                          UnlearnMode::kBatch);
  absl::StatusOr<std::vector<RetrainJob>> jobs = st.ProcessBatch({1, 2});
  ASSERT_TRUE(jobs.ok());
  ASSERT_EQ(jobs->size(), 1u);
  EXPECT_EQ((*jobs)[0].users_retrained(), 8);

  UnlearnState spread = *UnlearnState::Create(
      Plan(3, 10, 2, 0, 5), Blocks(3, 10), UnlearnMode::kBatch);
  jobs = spread.ProcessBatch({0, 10, 20});
  ASSERT_EQ(jobs->size(), 3u);
  for (const RetrainJob& j : *jobs) EXPECT_EQ(j.users_retrained(), 9);
  EXPECT_EQ(spread.requests_consumed(), 3);
}

TEST(UnlearningTest, EmptyBatchIsNoop) {
  UnlearnState st = *UnlearnState::Create(Plan(3, 10, 2, 0, 5), Blocks(3, 10),
                                          UnlearnMode::kBatch);
  EXPECT_TRUE(st.ProcessBatch({})->empty());
  EXPECT_EQ(st.requests_consumed(), 0);
  EXPECT_TRUE(st.retrain_log().empty());
}

TEST(UnlearningTest, RejectedBatchesRemoveNobody) {
  UnlearnState st = *UnlearnState::Create(Plan(3, 10, 1, 0, 3), Blocks(3, 10),
                                          UnlearnMode::kBatch);
  EXPECT_TRUE(
      IsKind(st.ProcessBatch({1, 1}).status(), ErrorKind::kDuplicateTarget));
  EXPECT_TRUE(IsKind(st.ProcessBatch({1, 2, 3, 4}).status(),
                     ErrorKind::kCapacityExhausted));
  EXPECT_EQ(st.requests_consumed(), 0);
  EXPECT_TRUE(IsKind(st.ProcessBatch({1, 2}).status(),
                     ErrorKind::kPerClusterBudgetExceeded));
  EXPECT_EQ(st.requests_consumed(), 2);
  EXPECT_EQ(st.removed_per_cluster(), (std::vector<int>{0, 0, 0}));
  EXPECT_FALSE(st.is_unlearned(1));
  EXPECT_EQ(ComputeRetrainedStatistics(st).rejected, 1);
}

TEST(UnlearningTest, UntouchedClustersStayIdentical) {
  UnlearnState st = *UnlearnState::Create(Plan(4, 5, 2, 10, 0), Blocks(4, 5),
                                          UnlearnMode::kSequential);
  const std::vector<UserId> before = st.RemainingMembers(2);
  ASSERT_TRUE(st.ProcessSequential(0).ok());
  ASSERT_TRUE(st.ProcessSequential(16).ok());
  EXPECT_EQ(st.RemainingMembers(2), before);
  EXPECT_EQ(st.removed_per_cluster()[2], 0);
}

TEST(UnlearningTest, StatisticsAndLog) {
  UnlearnState st = *UnlearnState::Create(Plan(2, 10, 2, 5, 0), Blocks(2, 10),
                                          UnlearnMode::kSequential);
  EXPECT_EQ(ComputeRetrainedStatistics(st).total_retrained, 0);
  ASSERT_TRUE(st.ProcessSequential(3).ok());
  RetrainedStatistics stats = ComputeRetrainedStatistics(st);
  EXPECT_EQ(stats.total_retrained, 9);
  EXPECT_EQ(stats.max_q, 1);
  EXPECT_EQ(stats.q_histogram, (std::map<int, int>{{0, 1}, {1, 1}}));
  EXPECT_EQ(RetrainLogCsv(st.retrain_log()),
            "request_index,mode,cluster_id,users_retrained,q_i_after,"
            "accepted\n0,seq,0,9,1,true\n");
}

TEST(UnlearningTest, RequiresCapacityForMode) {
  ClusterPlanParams plan = Plan(2, 5, 1, 2, 0);
  plan.capacity_bat.reset();
  EXPECT_TRUE(IsKind(
      UnlearnState::Create(plan, Blocks(2, 5), UnlearnMode::kBatch).status(),
      ErrorKind::kGuardViolation));
}

// Uniform-cluster requests, as in the analysis: each request picks a
// cluster with probability 1/s.
double MeanRetrained(UnlearnMode mode, int trials, uint64_t seed) {
  const int s = 10;
  const int k = 10;
  const int tau = 5;
  Rng rng = MakeRng(seed, {});
  double total = 0;
  for (int i = 0; i < trials; ++i) {
    UnlearnState st = *UnlearnState::Create(Plan(s, k, tau, tau, tau),
                                            Blocks(s, k), mode);
    const ClusterAssignment& a = st.assignment();
    Population pop(s * k);
    std::vector<bool> chosen(s * k, false);
    std::vector<UserId> batch;
    for (int r = 0; r < tau; ++r) {
      const UserId u = DrawUnlearnTarget(a, pop, {}, chosen, rng);
      chosen[u] = true;
      if (mode == UnlearnMode::kSequential) {
        EXPECT_TRUE(st.ProcessSequential(u).ok());
      } else {
        batch.push_back(u);
      }
    }
    if (mode == UnlearnMode::kBatch) EXPECT_TRUE(st.ProcessBatch(batch).ok());
    total += ComputeRetrainedStatistics(st).total_retrained;
  }
  return total / trials;
}

TEST(UnlearningTest, BatchMeanMatchesExpectation) {
  const double mean = MeanRetrained(UnlearnMode::kBatch, 100000, 21);
  EXPECT_NEAR(mean, ExpectedRetrainedBatch(100, 10, 5), 0.01 * 35.951);
}

TEST(UnlearningTest, SequentialMeanMatchesDirectCount) {
  // tau (k - 1) minus one for every earlier request in the same cluster:
  // 5 * 9 - C(5, 2) / 10 = 44.
  EXPECT_NEAR(MeanRetrained(UnlearnMode::kSequential, 20000, 22), 44, 0.2);
}

}  // namespace
}  // namespace cfu
