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

#ifndef CFU_FLTRAIN_H_
#define CFU_FLTRAIN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/cohort.h"
#include "cfu/masking.h"
#include "cfu/topology.h"

namespace cfu {

// Row-major samples of one user. May be empty; empty users sit out
// aggregation.
struct LocalDataset {
  int dim = 0;
  std::vector<double> features;  // n_samples x dim
  std::vector<int> labels;

  int n_samples() const { return static_cast<int>(labels.size()); }
  std::span<const double> row(int i) const {
    return {features.data() + static_cast<size_t>(i) * dim,
            static_cast<size_t>(dim)};
  }
  void Append(std::span<const double> x, int label);
};

struct TaskParams {
  int n_users = 60;
  int dim = 10;
  int n_classes = 2;
  int samples_per_user = 20;
  int test_samples = 2000;
  double separation = 4.0;  // distance between any two class means
  uint64_t seed = 0;
};

struct SyntheticTask {
  int dim = 0;
  int n_classes = 0;
  std::vector<LocalDataset> users;
  LocalDataset test;
};

// Unit-variance Gaussian blobs with class means at separation/sqrt(2) times
// the first n_classes basis vectors, dealt IID to users.
absl::StatusOr<SyntheticTask> MakeSyntheticTask(const TaskParams& p);

// Multinomial logistic regression; row c of `params` holds w_c then b_c.
struct GlobalModel {
  int n_classes = 0;
  int dim = 0;
  std::vector<double> params;
  int round = 0;

  static GlobalModel Zero(int n_classes, int dim);
  double weight(int c, int j) const { return params[c * (dim + 1) + j]; }
  double bias(int c) const { return params[c * (dim + 1) + dim]; }
  int Predict(std::span<const double> x) const;
  friend bool operator==(const GlobalModel&, const GlobalModel&) = default;
};

// Mean cross-entropy plus (l2 / 2) |params|^2. Zero for an empty dataset.
double Loss(const GlobalModel& model, const LocalDataset& data, double l2);
double Accuracy(const GlobalModel& model, const LocalDataset& data);
LocalDataset Pool(std::span<const LocalDataset> parts);

struct LocalTrainParams {
  int epochs = 1;         // E
  double lr = 0.5;
  int batch_size = 5;     // 0 means full batch
  double l2 = 1e-3;
};

// Mini-batch gradient descent from `model`; returns the parameter delta.
// Batch order depends only on `stream_seed`. Divergence on non-finite loss.
absl::StatusOr<std::vector<double>> LocalUpdate(const GlobalModel& model,
                                                const LocalDataset& data,
                                                const LocalTrainParams& p,
                                                uint64_t stream_seed);

struct ClusterTrainConfig {
  LocalTrainParams local;
  int rounds = 30;
  double xi = 0.7;            // threshold fraction inside the cluster
  double dropout_rate = 0.0;  // per-(user, round) drop probability
  int scale_bits = 16;
  uint64_t master_seed = 0;
};

// Stream used by user `u` in round `r`; independent of who else trains.
uint64_t LocalStreamSeed(uint64_t master_seed, UserId u, int round);
// Whether `u` drops in round `r`.
bool DropsInRound(const ClusterTrainConfig& cfg, UserId u, int round);

// One FedAvg round through secure aggregation: each alive member's delta is
// quantized, masked and summed, and the model moves by the uniform average.
absl::StatusOr<GlobalModel> ClusterRound(const GlobalModel& model,
                                         std::span<const UserId> members,
                                         std::span<const LocalDataset> data,
                                         const VertexSet& dropouts,
                                         ClusterId cluster_id,
                                         const ClusterTrainConfig& cfg);

// Reference FedAvg without masking or quantization.
absl::StatusOr<GlobalModel> PlaintextClusterRound(
    const GlobalModel& model, std::span<const UserId> members,
    std::span<const LocalDataset> data, const VertexSet& dropouts,
    const ClusterTrainConfig& cfg);

struct ClusterTrainResult {
  GlobalModel model;
  std::vector<GlobalModel> history;  // model after each round
  int aborted_rounds = 0;
};

// From-scratch training of one cluster starting at the zero model. A round
// whose aggregation fails with ReconstructionFailure is aborted: the model
// keeps its parameters and only the round counter advances.
absl::StatusOr<ClusterTrainResult> TrainCluster(
    std::span<const UserId> members, std::span<const LocalDataset> data,
    int n_classes, ClusterId cluster_id, const ClusterTrainConfig& cfg);

// TrainCluster on `members` minus `unlearned`. DegenerateCluster when fewer
// than two members remain.
absl::StatusOr<GlobalModel> RetrainCluster(std::span<const UserId> members,
                                           const VertexSet& unlearned,
                                           std::span<const LocalDataset> data,
                                           int n_classes, ClusterId cluster_id,
                                           const ClusterTrainConfig& cfg);

// Plurality vote over argmax predictions; ties go to the smallest class.
int EnsemblePredict(std::span<const GlobalModel> models,
                    std::span<const double> x);
double EnsembleAccuracy(std::span<const GlobalModel> models,
                        const LocalDataset& data);

struct MetricsRow {
  int round = 0;
  ClusterId cluster_id = 0;
  double train_loss = 0;
  double test_accuracy = 0;
  double ensemble_accuracy = 0;
};

struct FederationResult {
  std::vector<GlobalModel> models;  // one per cluster
  std::vector<MetricsRow> metrics;
  int aborted_rounds = 0;  // summed over clusters
};

// Trains every cluster of `a`. train_loss is the global objective: the
// cluster model's loss on every user's training data pooled.
absl::StatusOr<FederationResult> TrainFederation(const SyntheticTask& task,
                                                 const ClusterAssignment& a,
                                                 const ClusterTrainConfig& cfg);

std::string MetricsCsv(std::span<const MetricsRow> rows);

}  // namespace cfu

#endif  // CFU_FLTRAIN_H_
