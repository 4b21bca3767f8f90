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

#include "cfu/cohort.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {
namespace {

int FloorCount(double fraction, int n) {
  return static_cast<int>(std::floor(fraction * n + 1e-9));
}

std::vector<bool> DrawSubset(int n, int count, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> chosen(n, false);
  for (int i = 0; i < count; ++i) chosen[order[i]] = true;
  return chosen;
}

bool Eligible(UserId u, const Population& pop, const TargetPolicy& policy,
              const std::vector<bool>& exclude) {
  if (pop.unlearned[u]) return false;
  if (policy.honest_only && pop.adversarial[u]) return false;
  return exclude.empty() || !exclude[u];
}

}  // namespace

absl::Status ClusterAssignment::Validate() const {
  std::vector<int> seen(cluster_of.size(), 0);
  for (int c = 0; c < n_clusters(); ++c) {
    for (UserId u : members[c]) {
      if (u < 0 || u >= n_users()) {
        return MakeError(ErrorKind::kUnknownUser,
                         absl::StrFormat("user %d out of range", u));
      }
      if (cluster_of[u] != c || ++seen[u] > 1) {
        return MakeError(ErrorKind::kInvalidArgument,
                         absl::StrFormat("user %d inconsistently assigned", u));
      }
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
    return MakeError(ErrorKind::kInvalidArgument, "some user is unassigned");
  }
  return absl::OkStatus();
}

Population Population::FromSets(int n, const VertexSet& adversarial,
                                const VertexSet& dropped,
                                const VertexSet& unlearned) {
  Population pop(n);
  for (int u : adversarial) pop.adversarial[u] = true;
  for (int u : dropped) pop.dropped[u] = true;
  for (int u : unlearned) pop.unlearned[u] = true;
  return pop;
}

absl::StatusOr<ClusterAssignment> AssignClusters(int n, int k, int s,
                                                 Rng& rng) {
  if (k < 1 || k > n) {
    return MakeError(ErrorKind::kInfeasibleParameters,
                     absl::StrFormat("cluster size %d does not fit %d users", k,
                                     n));
  }
  if (s != n / k) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrFormat("s = %d but floor(N/k) = %d", s, n / k));
  }
  std::vector<UserId> permutation(n);
  std::iota(permutation.begin(), permutation.end(), 0);
  std::shuffle(permutation.begin(), permutation.end(), rng);

  ClusterAssignment a;
  a.cluster_of.assign(n, -1);
  a.members.resize(s);
  for (int i = 0; i < s * k; ++i) {
    const ClusterId c = i / k;
    a.members[c].push_back(permutation[i]);
    a.cluster_of[permutation[i]] = c;
  }
  std::vector<ClusterId> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = s * k; i < n; ++i) {
    const ClusterId c = order[(i - s * k) % s];
    a.members[c].push_back(permutation[i]);
    a.cluster_of[permutation[i]] = c;
  }
  return a;
}

Population SamplePopulation(int n, double gamma, double delta, Rng& rng) {
  Population pop(n);
  pop.adversarial = DrawSubset(n, FloorCount(gamma, n), rng);
  pop.dropped = DrawSubset(n, FloorCount(delta, n), rng);
  return pop;
}

absl::StatusOr<const HararyGraph*> GraphCache::ForSize(int k) {
  auto it = graphs_.find(k);
  if (it == graphs_.end()) {
    absl::StatusOr<int> m = ChooseDegree(k);
    if (!m.ok()) return m.status();
    absl::StatusOr<HararyGraph> g = BuildHarary(k, *m);
    if (!g.ok()) return g.status();
    it = graphs_.emplace(k, *std::move(g)).first;
  }
  return &it->second;
}

absl::StatusOr<std::vector<std::vector<UserId>>> ClusterHonestPartition(
    const ClusterAssignment& a, ClusterId c, const Population& pop,
    GraphCache* cache) {
  GraphCache local;
  if (cache == nullptr) cache = &local;
  const std::vector<UserId>& members = a.members[c];
  absl::StatusOr<const HararyGraph*> g =
      cache->ForSize(static_cast<int>(members.size()));
  if (!g.ok()) return g.status();
  std::vector<bool> keep(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    keep[i] = pop.honest_alive(members[i]);
  }
  std::vector<std::vector<UserId>> blocks = InducedComponents(**g, keep);
  for (std::vector<UserId>& block : blocks) {
    for (UserId& v : block) v = members[v];
    std::sort(block.begin(), block.end());
  }
  return blocks;
}

absl::StatusOr<RequirementStatus> CheckRequirements(
    const ClusterAssignment& a, const Population& pop, int t, int q,
    GraphCache* cache) {
  GraphCache local;
  if (cache == nullptr) cache = &local;
  RequirementStatus status;
  for (ClusterId c = 0; c < a.n_clusters(); ++c) {
    const std::vector<UserId>& members = a.members[c];
    if (static_cast<int>(members.size()) <= t) {
      return MakeError(ErrorKind::kInvalidThreshold,
                       absl::StrFormat("threshold %d not below size %d of "
                                       "cluster %d",
                                       t, members.size(), c));
    }
    int adversarial = 0;
    int remaining = 0;
    int unlearned = 0;
    for (UserId u : members) {
      adversarial += pop.adversarial[u];
      remaining += !pop.dropped[u] && !pop.unlearned[u];
      unlearned += pop.unlearned[u];
    }
    status.r1 = status.r1 && adversarial < t;
    status.r2 = status.r2 && remaining >= t;
    status.r4 = status.r4 && unlearned <= q;
    if (status.r3) {
      absl::StatusOr<std::vector<std::vector<UserId>>> blocks =
          ClusterHonestPartition(a, c, pop, cache);
      if (!blocks.ok()) return blocks.status();
      status.r3 = blocks->size() <= 1;
    }
  }
  return status;
}

UserId DrawUnlearnTarget(const ClusterAssignment& a, const Population& pop,
                         const TargetPolicy& policy,
                         const std::vector<bool>& exclude, Rng& rng) {
  std::vector<UserId> candidates;
  if (policy.model == TargetModel::kUniformCluster) {
    const ClusterId c =
        static_cast<ClusterId>(UniformBelow(rng, a.n_clusters()));
    for (UserId u : a.members[c]) {
      if (Eligible(u, pop, policy, exclude)) candidates.push_back(u);
    }
  } else {
    for (UserId u = 0; u < a.n_users(); ++u) {
      if (Eligible(u, pop, policy, exclude)) candidates.push_back(u);
    }
  }
  if (candidates.empty()) return -1;
  return candidates[UniformBelow(rng, candidates.size())];
}

}  // namespace cfu
