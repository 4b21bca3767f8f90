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

#include "cfu/fltrain.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "cfu/rng.h"
#include "cfu/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cfu {
namespace {

using ::testing::StartsWith;

std::vector<UserId> Range(int n) {
  std::vector<UserId> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

SyntheticTask SmallTask(uint64_t seed) {
  TaskParams p;
  p.n_users = 12;
  p.seed = seed;
  return *MakeSyntheticTask(p);
}

TEST(FlTrainTest, TaskIsDeterministic) {
  SyntheticTask a = SmallTask(3);
  SyntheticTask b = SmallTask(3);
  ASSERT_EQ(a.users.size(), 12u);
  EXPECT_EQ(a.users[5].features, b.users[5].features);
  EXPECT_EQ(a.test.labels, b.test.labels);
  EXPECT_NE(a.users[5].features, SmallTask(4).users[5].features);
  EXPECT_EQ(a.users[0].n_samples(), 20);
  EXPECT_EQ(a.test.n_samples(), 2000);
}

TEST(FlTrainTest, TaskRejectsBadShapes) {
  TaskParams p;
  p.n_classes = 11;
  EXPECT_TRUE(IsKind(MakeSyntheticTask(p).status(),
                     ErrorKind::kInvalidArgument));
  p.n_classes = 1;
  EXPECT_FALSE(MakeSyntheticTask(p).ok());
}

// Nearest class mean, using the true means. Trained models should come close
// to this classifier.
double CentroidAccuracy(const SyntheticTask& task, double separation) {
  const double scale = separation / std::sqrt(2.0);
  int correct = 0;
  for (int i = 0; i < task.test.n_samples(); ++i) {
    auto x = task.test.row(i);
    int best = 0;
    double best_d = INFINITY;
    for (int c = 0; c < task.n_classes; ++c) {
      double d = 0;
      for (int j = 0; j < task.dim; ++j) {
        const double diff = x[j] - (j == c ? scale : 0.0);
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    correct += best == task.test.labels[i];
  }
  return static_cast<double>(correct) / task.test.n_samples();
}

TEST(FlTrainTest, ClusterLearnsTheTask) {
  SyntheticTask task = SmallTask(1);
  ClusterTrainConfig cfg;
  cfg.master_seed = 5;
  ClusterTrainResult r = *TrainCluster(Range(12), task.users, 2, 0, cfg);
  EXPECT_EQ(r.history.size(), 30u);
  EXPECT_EQ(r.model.round, 30);
  const double centroid = CentroidAccuracy(task, 4.0);
  EXPECT_GE(centroid, 0.95);
  EXPECT_GE(Accuracy(r.model, task.test), centroid - 0.02);
}

TEST(FlTrainTest, ZeroLearningRateGivesZeroDelta) {
  SyntheticTask task = SmallTask(1);
  LocalTrainParams p;
  p.lr = 0;
  std::vector<double> d =
      *LocalUpdate(GlobalModel::Zero(2, 10), task.users[0], p, 1);
  EXPECT_EQ(d, std::vector<double>(22, 0.0));
  p.lr = 0.5;
  d = *LocalUpdate(GlobalModel::Zero(2, 10), LocalDataset{10, {}, {}}, p, 1);
  EXPECT_EQ(d, std::vector<double>(22, 0.0));
}

TEST(FlTrainTest, TwoPointStepByHand) {
  // At the zero model both classes have probability 1/2, so the gradient of
  // w_1 is ((1/2 - 1) x_a + (1/2) x_b) / 2 with x_a = (1, 0) labeled 1 and
  // x_b = (-1, 0) labeled 0, i.e. (-1/2, 0). One unit step gives w_1 = (1/2,
  // 0), w_0 = (-1/2, 0) and zero biases.
  LocalDataset data{2, {}, {}};
  data.Append(std::vector<double>{1, 0}, 1);
  data.Append(std::vector<double>{-1, 0}, 0);
  LocalTrainParams p;
  p.lr = 1;
  p.batch_size = 0;
  p.l2 = 0;
  EXPECT_EQ(*LocalUpdate(GlobalModel::Zero(2, 2), data, p, 9),
            (std::vector<double>{-0.5, 0, 0, 0.5, 0, 0}));
}

TEST(FlTrainTest, SmallFullBatchStepDecreasesLoss) {
  Rng rng = MakeRng(31, {});
  std::normal_distribution<double> normal(0.0, 1.0);
  LocalTrainParams p;
  p.lr = 0.05;
  p.batch_size = 0;
  for (int trial = 0; trial < 100; ++trial) {
    TaskParams tp;
    tp.n_users = 1;
    tp.n_classes = 3;
    tp.seed = trial;
    SyntheticTask task = *MakeSyntheticTask(tp);
    GlobalModel m = GlobalModel::Zero(3, 10);
    for (double& w : m.params) w = normal(rng);
    const double before = Loss(m, task.users[0], p.l2);
    std::vector<double> d = *LocalUpdate(m, task.users[0], p, trial);
    for (size_t j = 0; j < d.size(); ++j) m.params[j] += d[j];
    EXPECT_LT(Loss(m, task.users[0], p.l2), before) << trial;
  }
}

TEST(FlTrainTest, LocalUpdateDependsOnlyOnStream) {
  SyntheticTask task = SmallTask(2);
  LocalTrainParams p;
  const GlobalModel m = GlobalModel::Zero(2, 10);
  EXPECT_EQ(*LocalUpdate(m, task.users[1], p, 77),
            *LocalUpdate(m, task.users[1], p, 77));
  EXPECT_NE(*LocalUpdate(m, task.users[1], p, 77),
            *LocalUpdate(m, task.users[1], p, 78));
}

TEST(FlTrainTest, HugeStepDiverges) {
  SyntheticTask task = SmallTask(2);
  LocalTrainParams p;
  p.lr = 1e308;
  EXPECT_TRUE(IsKind(
      LocalUpdate(GlobalModel::Zero(2, 10), task.users[0], p, 1).status(),
      ErrorKind::kDivergence));
}

TEST(FlTrainTest, IdenticalDeltasMoveModelByThatDelta) {
  // Every member holds the same data, so the average of the equal deltas is
  // the delta itself up to quantization.
  SyntheticTask task = SmallTask(6);
  std::vector<LocalDataset> data(5, task.users[0]);
  ClusterTrainConfig cfg;
  cfg.local.batch_size = 0;
  const GlobalModel m = GlobalModel::Zero(2, 10);
  std::vector<double> d = *LocalUpdate(m, data[0], cfg.local, 0);
  GlobalModel next = *ClusterRound(m, Range(5), data, {}, 0, cfg);
  for (size_t j = 0; j < d.size(); ++j) {
    EXPECT_NEAR(next.params[j], d[j], std::ldexp(1.0, -16));
  }
}

TEST(FlTrainTest, SecureRoundTracksPlaintext) {
  SyntheticTask task = SmallTask(7);
  ClusterTrainConfig cfg;
  cfg.master_seed = 8;
  const std::vector<UserId> members = Range(12);
  const double tol = 12 * std::ldexp(1.0, -16);
  GlobalModel m = GlobalModel::Zero(2, 10);
  for (int r = 0; r < 100; ++r) {
    VertexSet drops;
    if (r % 3 == 0) drops = {r % 12, (r + 5) % 12};
    GlobalModel secure = *ClusterRound(m, members, task.users, drops, 0, cfg);
    GlobalModel plain =
        *PlaintextClusterRound(m, members, task.users, drops, cfg);
    ASSERT_EQ(secure.round, plain.round);
    for (size_t j = 0; j < m.params.size(); ++j) {
      ASSERT_NEAR(secure.params[j], plain.params[j], tol) << r;
    }
    m = secure;
  }
}

TEST(FlTrainTest, DroppedUserDataIsIgnored) {
  SyntheticTask task = SmallTask(9);
  ClusterTrainConfig cfg;
  const GlobalModel m = GlobalModel::Zero(2, 10);
  GlobalModel a = *ClusterRound(m, Range(6), task.users, {2}, 0, cfg);
  task.users[2] = task.users[7];
  GlobalModel b = *ClusterRound(m, Range(6), task.users, {2}, 0, cfg);
  EXPECT_EQ(a, b);
}

TEST(FlTrainTest, DropoutRate) {
  ClusterTrainConfig cfg;
  cfg.dropout_rate = 0.25;
  int drops = 0;
  for (int u = 0; u < 100; ++u) {
    for (int r = 0; r < 100; ++r) drops += DropsInRound(cfg, u, r);
  }
  EXPECT_NEAR(drops / 1e4, 0.25, 0.02);
  cfg.dropout_rate = 0;
  EXPECT_FALSE(DropsInRound(cfg, 1, 1));
}

GlobalModel Constant(int predicted, int n_classes) {
  GlobalModel m = GlobalModel::Zero(n_classes, 1);
  m.params[predicted * 2 + 1] = 1;  // bias
  return m;
}

TEST(FlTrainTest, RoundsBelowThresholdAbort) {
  SyntheticTask task = SmallTask(16);
  ClusterTrainConfig cfg;
  cfg.rounds = 20;
  cfg.dropout_rate = 0.4;
  ClusterTrainResult r = *TrainCluster(Range(6), task.users, 2, 0, cfg);
  ASSERT_EQ(r.history.size(), 20u);
  EXPECT_GT(r.aborted_rounds, 0);
  EXPECT_LT(r.aborted_rounds, 20);
  int aborted = 0;
  GlobalModel prev = GlobalModel::Zero(2, 10);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(r.history[i].round, i + 1);
    int alive = 0;
    for (UserId u = 0; u < 6; ++u) alive += !DropsInRound(cfg, u, i);
    // Threshold ceil(0.7 * 6) = 5.
    if (alive < 5) {
      ++aborted;
      EXPECT_EQ(r.history[i].params, prev.params) << i;
    } else {
      EXPECT_NE(r.history[i].params, prev.params) << i;
    }
    prev = r.history[i];
  }
  EXPECT_EQ(aborted, r.aborted_rounds);
}

TEST(FlTrainTest, EnsembleVotes) {
  const std::vector<double> x = {0.0};
  std::vector<GlobalModel> models = {Constant(1, 3), Constant(2, 3),
                                     Constant(1, 3)};
  EXPECT_EQ(EnsemblePredict(models, x), 1);
  models = {Constant(2, 3), Constant(1, 3)};
  EXPECT_EQ(EnsemblePredict(models, x), 1);
  models = {Constant(2, 3), Constant(0, 3)};
  EXPECT_EQ(EnsemblePredict(models, x), 0);
}

TEST(FlTrainTest, RetrainEqualsTrainingWithoutTarget) {
  SyntheticTask task = SmallTask(10);
  ClusterTrainConfig cfg;
  cfg.rounds = 10;
  cfg.dropout_rate = 0.1;
  cfg.master_seed = 11;
  const std::vector<UserId> members = Range(8);
  GlobalModel retrained =
      *RetrainCluster(members, {3}, task.users, 2, 0, cfg);
  std::vector<UserId> reduced = {0, 1, 2, 4, 5, 6, 7};
  ClusterTrainResult scratch = *TrainCluster(reduced, task.users, 2, 0, cfg);
  EXPECT_EQ(retrained, scratch.model);
  EXPECT_NE(retrained, TrainCluster(members, task.users, 2, 0, cfg)->model);
}

TEST(FlTrainTest, InfluenceWitnessIsForgotten) {
  SyntheticTask task = SmallTask(12);
  // User 0 holds points on the class 0 mean, shifted along the last
  // coordinate and labeled 1. Only user 0 can teach the model that label.
  LocalDataset witness{10, {}, {}};
  std::vector<double> x(10, 0.0);
  x[0] = 4 / std::sqrt(2.0);
  x[9] = 6;
  for (int i = 0; i < 20; ++i) witness.Append(x, 1);
  task.users[0] = witness;
  ClusterTrainConfig cfg;
  cfg.rounds = 20;
  GlobalModel before = TrainCluster(Range(6), task.users, 2, 0, cfg)->model;
  GlobalModel after = *RetrainCluster(Range(6), {0}, task.users, 2, 0, cfg);
  EXPECT_NE(before, after);
  EXPECT_EQ(Accuracy(before, witness), 1.0);
  EXPECT_EQ(Accuracy(after, witness), 0.0);
}

TEST(FlTrainTest, EmptyUsersSitOut) {
  SyntheticTask task = SmallTask(13);
  task.users[4] = LocalDataset{10, {}, {}};
  ClusterTrainConfig cfg;
  cfg.rounds = 5;
  GlobalModel with = TrainCluster(Range(6), task.users, 2, 0, cfg)->model;
  std::vector<UserId> without = {0, 1, 2, 3, 5};
  EXPECT_EQ(with, TrainCluster(without, task.users, 2, 0, cfg)->model);
}

TEST(FlTrainTest, DegenerateClusters) {
  SyntheticTask task = SmallTask(14);
  ClusterTrainConfig cfg;
  cfg.rounds = 2;
  EXPECT_TRUE(IsKind(
      RetrainCluster(Range(2), {1}, task.users, 2, 0, cfg).status(),
      ErrorKind::kDegenerateCluster));
  EXPECT_TRUE(IsKind(TrainCluster({}, task.users, 2, 0, cfg).status(),
                     ErrorKind::kDegenerateCluster));
  // Two members train over the complete graph.
  EXPECT_TRUE(TrainCluster(Range(2), task.users, 2, 0, cfg).ok());
}

TEST(FlTrainTest, FederationMetrics) {
  SyntheticTask task = SmallTask(15);
  ClusterAssignment a;
  a.members = {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11}};
  for (int u = 0; u < 12; ++u) a.cluster_of.push_back(u / 6);
  ClusterTrainConfig cfg;
  cfg.rounds = 3;
  FederationResult f = *TrainFederation(task, a, cfg);
  ASSERT_EQ(f.models.size(), 2u);
  ASSERT_EQ(f.metrics.size(), 6u);
  EXPECT_EQ(f.metrics.back().round, 3);
  EXPECT_EQ(f.metrics.back().cluster_id, 1);
  EXPECT_DOUBLE_EQ(f.metrics.back().train_loss,
                   Loss(f.models[1], Pool(task.users), cfg.local.l2));
  EXPECT_DOUBLE_EQ(f.metrics.back().ensemble_accuracy,
                   EnsembleAccuracy(f.models, task.test));
  EXPECT_THAT(MetricsCsv(f.metrics),
              StartsWith("round,cluster_id,train_loss,test_accuracy,"
                         "ensemble_accuracy\n1,0,"));
}

}  // namespace
}  // namespace cfu
