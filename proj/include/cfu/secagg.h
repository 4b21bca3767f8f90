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

#ifndef CFU_SECAGG_H_
#define CFU_SECAGG_H_

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/cohort.h"
#include "cfu/field.h"
#include "cfu/masking.h"
#include "cfu/rng.h"
#include "cfu/shamir.h"
#include "cfu/topology.h"

namespace cfu {

// Shares of the pairwise seed between `owner` and `peer`, distributed by
// `owner` and held by `holder`.
struct SeedShareKey {
  UserId owner;
  UserId peer;
  UserId holder;
  friend auto operator<=>(const SeedShareKey&, const SeedShareKey&) = default;
};
using LimbShares = std::array<ShamirShare, 3>;

enum class FindingKind {
  kPartialSumExposure,  // honest alive users split into several blocks
  kShamirBreach,        // colluding members reach the threshold
};

struct PrivacyFinding {
  FindingKind kind;
  std::vector<UserId> users;
  friend bool operator==(const PrivacyFinding&,
                         const PrivacyFinding&) = default;
};

enum class ShareScope {
  // Every participant holds shares of every seed, threshold t.
  kCluster,
  // Only the owner's graph neighbors hold shares, threshold ceil(xi * m) for
  // m participating neighbors.
  kNeighbors,
};

struct RoundSpec {
  ClusterId cluster_id = 0;
  // Graph vertex i is members[i]; the total order for masking is by user id.
  std::vector<UserId> members;
  std::map<UserId, FieldVector> inputs;
  // Fail after seed sharing but before upload.
  VertexSet dropouts;
  // Removed by unlearning before setup; they neither mask nor hold shares.
  VertexSet unlearned;
  int threshold = 1;
  Nonce nonce{};
  ShareScope share_scope = ShareScope::kCluster;
  double neighbor_xi = 0;  // used by kNeighbors only
};

struct RoundTranscript {
  explicit RoundTranscript(HararyGraph g) : graph(std::move(g)) {}

  ClusterId cluster_id = 0;
  std::vector<UserId> members;
  HararyGraph graph;
  int threshold = 0;
  size_t dim = 0;
  // Plaintext inputs, kept only so tests can check the aggregate.
  std::map<UserId, FieldVector> inputs;
  std::map<UserId, FieldVector> masked;
  std::map<SeedShareKey, LimbShares> seed_shares;
  VertexSet dropouts;
  VertexSet unlearned;
  // (dropout, alive neighbor) -> reconstructed seed.
  std::map<std::pair<UserId, UserId>, Seed> recovered_seeds;
  std::optional<FieldVector> aggregate;
  std::vector<PrivacyFinding> privacy_findings;
  // Analytic traffic: masked vector plus outgoing seed shares.
  std::map<UserId, size_t> upload_bytes;
};

// One secure aggregation round within a cluster. ReconstructionFailure when
// fewer than `threshold` members stay alive.
absl::StatusOr<RoundTranscript> RunRound(const RoundSpec& spec,
                                         const HararyGraph& graph, Rng& rng);

// Server-side recomputation from masked uploads and recovered seeds only.
FieldVector ServerAggregate(const RoundTranscript& tr);

// Findings for a server colluding with `adversarial`.
std::vector<PrivacyFinding> AuditPrivacy(const RoundTranscript& tr,
                                         const VertexSet& adversarial);

// True iff the server-side aggregate equals the plaintext sum over alive
// uploaders and the stored aggregate.
bool VerifyTranscript(const RoundTranscript& tr);

std::string FindingKindName(FindingKind kind);
// Structured-text report: one `round` line, then one `finding` line each.
std::string FormatTranscript(const RoundTranscript& tr);
std::string FormatFailedRound(ClusterId cluster_id, int members, int alive,
                              int dropouts, const absl::Status& status);

}  // namespace cfu

#endif  // CFU_SECAGG_H_
