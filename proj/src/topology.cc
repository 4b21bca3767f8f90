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

#include "cfu/topology.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {

absl::StatusOr<HararyGraph> HararyGraph::Create(int n_vertices, int degree) {
  if (degree < 2 || degree % 2 != 0 || degree >= n_vertices) {
    return MakeError(ErrorKind::kInvalidDegree,
                     absl::StrFormat("degree %d must be even with 2 <= m < k "
                                     "(k = %d)",
                                     degree, n_vertices));
  }
  std::vector<std::vector<int>> adjacency(n_vertices);
  const int half = degree / 2;
  for (int v = 0; v < n_vertices; ++v) {
    std::vector<int>& nbrs = adjacency[v];
    nbrs.reserve(degree);
    for (int i = 1; i <= half; ++i) {
      nbrs.push_back((v + i) % n_vertices);
      nbrs.push_back((v - i + n_vertices) % n_vertices);
    }
    std::sort(nbrs.begin(), nbrs.end());
  }
  return HararyGraph(n_vertices, degree, std::move(adjacency));
}

HararyGraph HararyGraph::Complete(int n_vertices) {
  std::vector<std::vector<int>> adjacency(n_vertices);
  for (int v = 0; v < n_vertices; ++v) {
    for (int u = 0; u < n_vertices; ++u) {
      if (u != v) adjacency[v].push_back(u);
    }
  }
  return HararyGraph(n_vertices, std::max(n_vertices - 1, 0),
                     std::move(adjacency));
}

bool HararyGraph::adjacent(int u, int v) const {
  const std::vector<int>& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

absl::StatusOr<int> ChooseDegree(int k) {
  if (k < 3) {
    return MakeError(ErrorKind::kClusterTooSmall,
                     absl::StrFormat("cluster of %d users cannot host a "
                                     "Harary graph",
                                     k));
  }
  int m = static_cast<int>(std::ceil(std::log(static_cast<double>(k))));
  if (m % 2 != 0) ++m;
  return std::max(m, 2);
}

std::vector<std::vector<int>> InducedComponents(const HararyGraph& g,
                                                const std::vector<bool>& keep) {
  const int n = g.n_vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<int>> components;
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (!keep[start] || seen[start]) continue;
    std::vector<int>& component = components.emplace_back();
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (int u : g.neighbors(v)) {
        if (keep[u] && !seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
    std::sort(component.begin(), component.end());
  }
  return components;
}

bool ConnectedAfterRemoval(const HararyGraph& g, const VertexSet& removed) {
  std::vector<bool> keep(g.n_vertices(), true);
  for (int v : removed) keep[v] = false;
  return InducedComponents(g, keep).size() <= 1;
}

std::vector<std::vector<int>> HonestAlivePartition(const HararyGraph& g,
                                                   const VertexSet& adversarial,
                                                   const VertexSet& dropped,
                                                   const VertexSet& unlearned) {
  std::vector<bool> keep(g.n_vertices(), true);
  for (const VertexSet* set : {&adversarial, &dropped, &unlearned}) {
    for (int v : *set) keep[v] = false;
  }
  return InducedComponents(g, keep);
}

}  // namespace cfu
