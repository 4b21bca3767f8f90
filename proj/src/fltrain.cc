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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cfu/bounds.h"
#include "cfu/quantize.h"
#include "cfu/rng.h"
#include "cfu/secagg.h"
#include "cfu/status.h"

namespace cfu {
namespace {

// Domain tags for DeriveSeed paths.
constexpr uint64_t kTaskTag = 1;
constexpr uint64_t kLocalTag = 2;
constexpr uint64_t kDropTag = 3;
constexpr uint64_t kNonceTag = 4;
constexpr uint64_t kShareTag = 5;

// Class probabilities for one sample.
void Softmax(const GlobalModel& m, std::span<const double> x,
             std::vector<double>& p) {
  p.assign(m.n_classes, 0.0);
  double max_logit = -INFINITY;
  for (int c = 0; c < m.n_classes; ++c) {
    double z = m.bias(c);
    for (int j = 0; j < m.dim; ++j) z += m.weight(c, j) * x[j];
    p[c] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0;
  for (double& z : p) {
    z = std::exp(z - max_logit);
    total += z;
  }
  for (double& z : p) z /= total;
}

double L2Term(const GlobalModel& m, double l2) {
  double sq = 0;
  for (double w : m.params) sq += w * w;
  return 0.5 * l2 * sq;
}

// Gradient of the regularized mean loss over data rows `idx`.
void Gradient(const GlobalModel& m, const LocalDataset& data,
              std::span<const int> idx, double l2, std::vector<double>& grad) {
  grad.assign(m.params.size(), 0.0);
  std::vector<double> p;
  const int stride = m.dim + 1;
  for (int i : idx) {
    std::span<const double> x = data.row(i);
    Softmax(m, x, p);
    for (int c = 0; c < m.n_classes; ++c) {
      const double err = p[c] - (data.labels[i] == c ? 1.0 : 0.0);
      double* g = grad.data() + c * stride;
      for (int j = 0; j < m.dim; ++j) g[j] += err * x[j];
      g[m.dim] += err;
    }
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (size_t j = 0; j < grad.size(); ++j) {
    grad[j] = grad[j] * inv + l2 * m.params[j];
  }
}

absl::StatusOr<HararyGraph> RoundGraph(int n) {
  if (n < 3) return HararyGraph::Complete(n);
  absl::StatusOr<int> m = ChooseDegree(n);
  if (!m.ok()) return m.status();
  return BuildHarary(n, *m);
}

std::vector<UserId> ActiveMembers(std::span<const UserId> members,
                                  std::span<const LocalDataset> data) {
  std::vector<UserId> active;
  for (UserId u : members) {
    if (data[u].n_samples() > 0) active.push_back(u);
  }
  return active;
}

}  // namespace

void LocalDataset::Append(std::span<const double> x, int label) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

absl::StatusOr<SyntheticTask> MakeSyntheticTask(const TaskParams& p) {
  if (p.n_users < 1 || p.dim < 1 || p.n_classes < 2 ||
      p.samples_per_user < 1 || p.test_samples < 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "task sizes must be positive");
  }
  if (p.n_classes > p.dim) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "need dim >= n_classes for orthogonal class means");
  }
  Rng rng = MakeRng(p.seed, {kTaskTag});
  std::normal_distribution<double> noise(0.0, 1.0);
  const double scale = p.separation / std::sqrt(2.0);
  auto draw = [&](LocalDataset& out) {
    const int label = static_cast<int>(UniformBelow(rng, p.n_classes));
    std::vector<double> x(p.dim);
    for (int j = 0; j < p.dim; ++j) {
      x[j] = noise(rng) + (j == label ? scale : 0.0);
    }
    out.Append(x, label);
  };

  SyntheticTask task;
  task.dim = p.dim;
  task.n_classes = p.n_classes;
  task.users.assign(p.n_users, LocalDataset{p.dim, {}, {}});
  for (LocalDataset& user : task.users) {
    for (int i = 0; i < p.samples_per_user; ++i) draw(user);
  }
  task.test.dim = p.dim;
  for (int i = 0; i < p.test_samples; ++i) draw(task.test);
  return task;
}

GlobalModel GlobalModel::Zero(int n_classes, int dim) {
  return GlobalModel{n_classes, dim,
                     std::vector<double>(n_classes * (dim + 1), 0.0), 0};
}

int GlobalModel::Predict(std::span<const double> x) const {
  int best = 0;
  double best_logit = -INFINITY;
  for (int c = 0; c < n_classes; ++c) {
    double z = bias(c);
    for (int j = 0; j < dim; ++j) z += weight(c, j) * x[j];
    if (z > best_logit) {
      best = c;
      best_logit = z;
    }
  }
  return best;
}

double Loss(const GlobalModel& model, const LocalDataset& data, double l2) {
  if (data.n_samples() == 0) return 0;
  std::vector<double> p;
  double total = 0;
  for (int i = 0; i < data.n_samples(); ++i) {
    Softmax(model, data.row(i), p);
    total -= std::log(std::max(p[data.labels[i]], 1e-300));
  }
  return total / data.n_samples() + L2Term(model, l2);
}

double Accuracy(const GlobalModel& model, const LocalDataset& data) {
  if (data.n_samples() == 0) return 0;
  int correct = 0;
  for (int i = 0; i < data.n_samples(); ++i) {
    correct += model.Predict(data.row(i)) == data.labels[i];
  }
  return static_cast<double>(correct) / data.n_samples();
}

LocalDataset Pool(std::span<const LocalDataset> parts) {
  LocalDataset out;
  for (const LocalDataset& part : parts) {
    out.dim = part.dim;
    out.features.insert(out.features.end(), part.features.begin(),
                        part.features.end());
    out.labels.insert(out.labels.end(), part.labels.begin(),
                      part.labels.end());
  }
  return out;
}

absl::StatusOr<std::vector<double>> LocalUpdate(const GlobalModel& model,
                                                const LocalDataset& data,
                                                const LocalTrainParams& p,
                                                uint64_t stream_seed) {
  if (!(p.lr >= 0) || p.epochs < 0 || p.batch_size < 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "lr, epochs and batch size must be nonnegative");
  }
  GlobalModel local = model;
  const int n = data.n_samples();
  if (n > 0 && p.lr > 0) {
    Rng rng(stream_seed);
    const int batch = p.batch_size == 0 ? n : std::min(p.batch_size, n);
    std::vector<int> order(n);
    std::vector<double> grad;
    for (int e = 0; e < p.epochs; ++e) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int start = 0; start < n; start += batch) {
        const int len = std::min(batch, n - start);
        Gradient(local, data, std::span<const int>(order).subspan(start, len),
                 p.l2, grad);
        for (size_t j = 0; j < grad.size(); ++j) {
          local.params[j] -= p.lr * grad[j];
        }
      }
    }
    if (!std::isfinite(Loss(local, data, p.l2))) {
      return MakeError(ErrorKind::kDivergence,
                       absl::StrFormat("non-finite loss after %d epochs at "
                                       "lr %g",
                                       p.epochs, p.lr));
    }
  }
  std::vector<double> delta(model.params.size());
  for (size_t j = 0; j < delta.size(); ++j) {
    delta[j] = local.params[j] - model.params[j];
  }
  return delta;
}

uint64_t LocalStreamSeed(uint64_t master_seed, UserId u, int round) {
  return DeriveSeed(master_seed, {kLocalTag, static_cast<uint64_t>(u),
                                  static_cast<uint64_t>(round)});
}

bool DropsInRound(const ClusterTrainConfig& cfg, UserId u, int round) {
  if (cfg.dropout_rate <= 0) return false;
  Rng rng = MakeRng(cfg.master_seed, {kDropTag, static_cast<uint64_t>(u),
                                      static_cast<uint64_t>(round)});
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) <
         cfg.dropout_rate;
}

absl::StatusOr<GlobalModel> ClusterRound(const GlobalModel& model,
                                         std::span<const UserId> members,
                                         std::span<const LocalDataset> data,
                                         const VertexSet& dropouts,
                                         ClusterId cluster_id,
                                         const ClusterTrainConfig& cfg) {
  const std::vector<UserId> active = ActiveMembers(members, data);
  const int n = static_cast<int>(active.size());
  if (n < 2) {
    return MakeError(ErrorKind::kDegenerateCluster,
                     absl::StrFormat("cluster %d has %d training members",
                                     cluster_id, n));
  }
  absl::StatusOr<HararyGraph> graph = RoundGraph(n);
  if (!graph.ok()) return graph.status();

  RoundSpec spec;
  spec.cluster_id = cluster_id;
  spec.members = active;
  spec.threshold =
      std::max<int>(1, static_cast<int>(ShamirThreshold(cfg.xi, n)));
  const uint64_t round = static_cast<uint64_t>(model.round);
  spec.nonce = NonceFromUint(DeriveSeed(
      cfg.master_seed, {kNonceTag, static_cast<uint64_t>(cluster_id), round}));
  int alive = 0;
  for (UserId u : active) {
    std::vector<double> delta(model.params.size(), 0.0);
    if (dropouts.contains(u)) {
      spec.dropouts.insert(u);
    } else {
      absl::StatusOr<std::vector<double>> d = LocalUpdate(
          model, data[u], cfg.local,
          LocalStreamSeed(cfg.master_seed, u, model.round));
      if (!d.ok()) return d.status();
      delta = *std::move(d);
      ++alive;
    }
    absl::StatusOr<FieldVector> q = Quantize(delta, cfg.scale_bits);
    if (!q.ok()) return q.status();
    spec.inputs[u] = *std::move(q);
  }

  Rng share_rng = MakeRng(
      cfg.master_seed, {kShareTag, static_cast<uint64_t>(cluster_id), round});
  absl::StatusOr<RoundTranscript> tr = RunRound(spec, *graph, share_rng);
  if (!tr.ok()) return tr.status();

  const std::vector<double> sum = Dequantize(*tr->aggregate, cfg.scale_bits);
  GlobalModel next = model;
  for (size_t j = 0; j < sum.size(); ++j) next.params[j] += sum[j] / alive;
  next.round = model.round + 1;
  return next;
}

absl::StatusOr<GlobalModel> PlaintextClusterRound(
    const GlobalModel& model, std::span<const UserId> members,
    std::span<const LocalDataset> data, const VertexSet& dropouts,
    const ClusterTrainConfig& cfg) {
  std::vector<double> sum(model.params.size(), 0.0);
  int alive = 0;
  for (UserId u : ActiveMembers(members, data)) {
    if (dropouts.contains(u)) continue;
    absl::StatusOr<std::vector<double>> d =
        LocalUpdate(model, data[u], cfg.local,
                    LocalStreamSeed(cfg.master_seed, u, model.round));
    if (!d.ok()) return d.status();
    for (size_t j = 0; j < sum.size(); ++j) sum[j] += (*d)[j];
    ++alive;
  }
  if (alive == 0) {
    return MakeError(ErrorKind::kReconstructionFailure, "no alive members");
  }
  GlobalModel next = model;
  for (size_t j = 0; j < sum.size(); ++j) next.params[j] += sum[j] / alive;
  next.round = model.round + 1;
  return next;
}

absl::StatusOr<ClusterTrainResult> TrainCluster(
    std::span<const UserId> members, std::span<const LocalDataset> data,
    int n_classes, ClusterId cluster_id, const ClusterTrainConfig& cfg) {
  if (members.empty()) {
    return MakeError(ErrorKind::kDegenerateCluster, "empty cluster");
  }
  ClusterTrainResult result{
      GlobalModel::Zero(n_classes, data[members.front()].dim), {}};
  for (int r = 0; r < cfg.rounds; ++r) {
    VertexSet dropouts;
    for (UserId u : members) {
      if (DropsInRound(cfg, u, r)) dropouts.insert(u);
    }
    absl::StatusOr<GlobalModel> next =
        ClusterRound(result.model, members, data, dropouts, cluster_id, cfg);
    if (next.ok()) {
      result.model = *std::move(next);
    } else if (IsKind(next.status(), ErrorKind::kReconstructionFailure)) {
      ++result.model.round;
      ++result.aborted_rounds;
    } else {
      return next.status();
    }
    result.history.push_back(result.model);
  }
  return result;
}

absl::StatusOr<GlobalModel> RetrainCluster(std::span<const UserId> members,
                                           const VertexSet& unlearned,
                                           std::span<const LocalDataset> data,
                                           int n_classes, ClusterId cluster_id,
                                           const ClusterTrainConfig& cfg) {
  std::vector<UserId> remaining;
  for (UserId u : members) {
    if (!unlearned.contains(u)) remaining.push_back(u);
  }
  if (remaining.size() < 2) {
    return MakeError(ErrorKind::kDegenerateCluster,
                     absl::StrFormat("cluster %d keeps %d members",
                                     cluster_id, remaining.size()));
  }
  absl::StatusOr<ClusterTrainResult> result =
      TrainCluster(remaining, data, n_classes, cluster_id, cfg);
  if (!result.ok()) return result.status();
  return std::move(result->model);
}

int EnsemblePredict(std::span<const GlobalModel> models,
                    std::span<const double> x) {
  std::vector<int> votes;
  for (const GlobalModel& m : models) {
    const int c = m.Predict(x);
    if (c >= static_cast<int>(votes.size())) votes.resize(c + 1, 0);
    ++votes[c];
  }
  // max_element returns the first maximum, i.e. the smallest class id.
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) -
                          votes.begin());
}

double EnsembleAccuracy(std::span<const GlobalModel> models,
                        const LocalDataset& data) {
  if (data.n_samples() == 0) return 0;
  int correct = 0;
  for (int i = 0; i < data.n_samples(); ++i) {
    correct += EnsemblePredict(models, data.row(i)) == data.labels[i];
  }
  return static_cast<double>(correct) / data.n_samples();
}

absl::StatusOr<FederationResult> TrainFederation(
    const SyntheticTask& task, const ClusterAssignment& a,
    const ClusterTrainConfig& cfg) {
  FederationResult out;
  std::vector<std::vector<GlobalModel>> histories;
  const LocalDataset all = Pool(task.users);
  for (ClusterId c = 0; c < a.n_clusters(); ++c) {
    absl::StatusOr<ClusterTrainResult> r =
        TrainCluster(a.members[c], task.users, task.n_classes, c, cfg);
    if (!r.ok()) return r.status();
    out.models.push_back(r->model);
    histories.push_back(std::move(r->history));
    out.aborted_rounds += r->aborted_rounds;
  }
  for (int r = 0; r < cfg.rounds; ++r) {
    std::vector<GlobalModel> snapshot;
    for (const auto& h : histories) snapshot.push_back(h[r]);
    const double ensemble = EnsembleAccuracy(snapshot, task.test);
    for (ClusterId c = 0; c < a.n_clusters(); ++c) {
      out.metrics.push_back({r + 1, c,
                             Loss(snapshot[c], all, cfg.local.l2),
                             Accuracy(snapshot[c], task.test), ensemble});
    }
  }
  return out;
}

std::string MetricsCsv(std::span<const MetricsRow> rows) {
  std::string out =
      "round,cluster_id,train_loss,test_accuracy,ensemble_accuracy\n";
  for (const MetricsRow& r : rows) {
    absl::StrAppend(&out, r.round, ",", r.cluster_id, ",",
                    absl::StrFormat("%.9g,%.6f,%.6f", r.train_loss,
                                    r.test_accuracy, r.ensemble_accuracy),
                    "\n");
  }
  return out;
}

}  // namespace cfu
