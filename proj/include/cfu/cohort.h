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

#ifndef CFU_COHORT_H_
#define CFU_COHORT_H_

#include <cstdint>
#include <map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cfu/masking.h"
#include "cfu/rng.h"
#include "cfu/topology.h"

namespace cfu {

using ClusterId = int;

// Partition of users 0..N-1 into clusters. `members[c]` keeps the order in
// which users were placed; that order is the cluster's position on its
// Harary circle.
struct ClusterAssignment {
  std::vector<ClusterId> cluster_of;
  std::vector<std::vector<UserId>> members;

  int n_users() const { return static_cast<int>(cluster_of.size()); }
  int n_clusters() const { return static_cast<int>(members.size()); }
  // The two views agree and every user appears exactly once.
  absl::Status Validate() const;
};

// Roles and dynamic state of the user population.
struct Population {
  explicit Population(int n = 0)
      : adversarial(n, false), dropped(n, false), unlearned(n, false) {}

  int n_users() const { return static_cast<int>(adversarial.size()); }
  bool honest_alive(UserId u) const {
    return !adversarial[u] && !dropped[u] && !unlearned[u];
  }
  static Population FromSets(int n, const VertexSet& adversarial,
                             const VertexSet& dropped,
                             const VertexSet& unlearned);

  std::vector<bool> adversarial;  // A
  std::vector<bool> dropped;      // D
  std::vector<bool> unlearned;    // Q
};

// Random permutation into s clusters of k, then the N - sk leftover users
// dealt round-robin over a random cluster order.
absl::StatusOr<ClusterAssignment> AssignClusters(int n, int k, int s,
                                                 Rng& rng);

// Exactly floor(gamma N) adversaries and floor(delta N) dropouts, drawn
// independently (the sets may overlap).
Population SamplePopulation(int n, double gamma, double delta, Rng& rng);

struct RequirementStatus {
  bool r1 = true;  // Shamir security: |c & A| < t
  bool r2 = true;  // Shamir correctness: |c \ (D u Q)| >= t
  bool r3 = true;  // honest alive users connected on the Harary graph
  bool r4 = true;  // unlearning budget: |c & Q| <= q
  friend bool operator==(const RequirementStatus&,
                         const RequirementStatus&) = default;
};

// Memoizes one Harary graph per cluster size.
class GraphCache {
 public:
  absl::StatusOr<const HararyGraph*> ForSize(int k);

 private:
  std::map<int, HararyGraph> graphs_;
};

absl::StatusOr<RequirementStatus> CheckRequirements(
    const ClusterAssignment& a, const Population& pop, int t, int q,
    GraphCache* cache = nullptr);

// Honest alive partition of one cluster, in member positions mapped back to
// user ids.
absl::StatusOr<std::vector<std::vector<UserId>>> ClusterHonestPartition(
    const ClusterAssignment& a, ClusterId c, const Population& pop,
    GraphCache* cache = nullptr);

enum class TargetModel {
  // Each request hits a uniformly random cluster, then a uniformly random
  // eligible member of it.
  kUniformCluster,
  // Each request picks a uniformly random eligible user.
  kUniformUser,
};

struct TargetPolicy {
  TargetModel model = TargetModel::kUniformCluster;
  bool honest_only = true;
};

// Draws one unlearning target that is not yet unlearned and not in
// `exclude`. Returns -1 when no eligible user exists in the drawn cluster
// (or overall, for kUniformUser).
UserId DrawUnlearnTarget(const ClusterAssignment& a, const Population& pop,
                         const TargetPolicy& policy,
                         const std::vector<bool>& exclude, Rng& rng);

}  // namespace cfu

#endif  // CFU_COHORT_H_
