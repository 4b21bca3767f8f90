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

#ifndef CFU_TOPOLOGY_H_
#define CFU_TOPOLOGY_H_

#include <cstdint>
#include <set>
#include <vector>

#include "absl/status/statusor.h"

namespace cfu {

using VertexSet = std::set<int>;

// (k, m) Harary graph: k vertices on a circle, each joined to the m/2
// nearest vertices on either side. Immutable once built.
class HararyGraph {
 public:
  static absl::StatusOr<HararyGraph> Create(int n_vertices, int degree);
  // K_n, i.e. H(n, n - 1); used where n is too small for an even degree.
  static HararyGraph Complete(int n_vertices);

  int n_vertices() const { return n_vertices_; }
  int degree() const { return degree_; }
  // Sorted ascending.
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  bool adjacent(int u, int v) const;

 private:
  HararyGraph(int n_vertices, int degree,
              std::vector<std::vector<int>> adjacency)
      : n_vertices_(n_vertices),
        degree_(degree),
        adjacency_(std::move(adjacency)) {}

  int n_vertices_;
  int degree_;
  std::vector<std::vector<int>> adjacency_;
};

// Smallest even integer >= ln k, at least 2. ClusterTooSmall for k < 3.
absl::StatusOr<int> ChooseDegree(int k);

// InvalidDegree unless m is even and 2 <= m < k.
inline absl::StatusOr<HararyGraph> BuildHarary(int k, int m) {
  return HararyGraph::Create(k, m);
}

// Connected components of the subgraph induced on vertices with keep[v] set,
// each sorted, ordered by smallest member.
std::vector<std::vector<int>> InducedComponents(const HararyGraph& g,
                                                const std::vector<bool>& keep);

// True iff the graph minus `removed` is connected (empty and singleton
// remainders count as connected).
bool ConnectedAfterRemoval(const HararyGraph& g, const VertexSet& removed);

// Components of the honest alive vertices. Adversarial vertices are removed
// along with dropped and unlearned ones, so they never bridge honest users.
std::vector<std::vector<int>> HonestAlivePartition(const HararyGraph& g,
                                                   const VertexSet& adversarial,
                                                   const VertexSet& dropped,
                                                   const VertexSet& unlearned);

}  // namespace cfu

#endif  // CFU_TOPOLOGY_H_
