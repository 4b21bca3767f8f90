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

#include "cfu/secagg.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "cfu/bounds.h"
#include "cfu/status.h"

namespace cfu {
namespace {

constexpr size_t kElementBytes = 8;
constexpr size_t kShareBytes = 16;

}  // namespace

absl::StatusOr<RoundTranscript> RunRound(const RoundSpec& spec,
                                         const HararyGraph& graph, Rng& rng) {
  const PrimeField& field = kDefaultField;
  const int n = static_cast<int>(spec.members.size());
  if (graph.n_vertices() != n) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrFormat("graph has %d vertices for %d members",
                                     graph.n_vertices(), n));
  }

  std::vector<UserId> participants;
  std::vector<UserId> alive;
  for (UserId u : spec.members) {
    if (spec.unlearned.contains(u)) continue;
    participants.push_back(u);
    if (!spec.dropouts.contains(u)) alive.push_back(u);
  }
  if (static_cast<int>(alive.size()) < spec.threshold) {
    return MakeError(
        ErrorKind::kReconstructionFailure,
        absl::StrFormat("cluster %d: %d alive users below threshold %d",
                        spec.cluster_id, alive.size(), spec.threshold));
  }

  RoundTranscript tr(graph);
  tr.cluster_id = spec.cluster_id;
  tr.members = spec.members;
  tr.threshold = spec.threshold;
  tr.dropouts = spec.dropouts;
  tr.unlearned = spec.unlearned;

  std::optional<size_t> dim;
  for (UserId u : participants) {
    auto it = spec.inputs.find(u);
    if (it == spec.inputs.end()) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrFormat("no input for user %d", u));
    }
    if (dim.has_value() && it->second.size() != *dim) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrFormat("user %d input has length %d, want %d",
                                       u, it->second.size(), *dim));
    }
    dim = it->second.size();
    tr.inputs[u] = it->second;
  }
  tr.dim = dim.value_or(0);

  // Seed agreement along graph edges between participants.
  std::map<UserId, std::map<UserId, Seed>> seeds;
  for (int i = 0; i < n; ++i) {
    const UserId u = spec.members[i];
    if (spec.unlearned.contains(u)) continue;
    for (int j : graph.neighbors(i)) {
      const UserId v = spec.members[j];
      if (spec.unlearned.contains(v)) continue;
      absl::StatusOr<Seed> seed = AgreeSeed(u, v, spec.nonce);
      if (!seed.ok()) return seed.status();
      seeds[u][v] = *seed;
    }
  }

  // Holder lists and thresholds per seed owner. Holder position h receives
  // evaluation point h + 1.
  std::map<UserId, std::vector<UserId>> holders_of;
  std::map<UserId, int> threshold_of;
  for (UserId owner : participants) {
    if (spec.share_scope == ShareScope::kCluster) {
      holders_of[owner] = participants;
      threshold_of[owner] = spec.threshold;
    } else {
      std::vector<UserId>& holders = holders_of[owner];
      for (const auto& [peer, unused] : seeds[owner]) holders.push_back(peer);
      threshold_of[owner] = static_cast<int>(
          ShamirThreshold(spec.neighbor_xi, std::ssize(holders)));
    }
  }

  for (UserId owner : participants) {
    const std::vector<UserId>& holders = holders_of[owner];
    const int n_holders = static_cast<int>(holders.size());
    size_t shares_sent = 0;
    for (const auto& [peer, seed] : seeds[owner]) {
      const std::array<FieldElement, 3> limbs = SeedToLimbs(seed);
      std::array<std::vector<ShamirShare>, 3> limb_shares;
      for (int l = 0; l < 3; ++l) {
        absl::StatusOr<std::vector<ShamirShare>> shares = ShareSecret(
            field, limbs[l], threshold_of[owner], n_holders, rng);
        if (!shares.ok()) return shares.status();
        limb_shares[l] = *std::move(shares);
      }
      for (int h = 0; h < n_holders; ++h) {
        tr.seed_shares[{owner, peer, holders[h]}] = {
            limb_shares[0][h], limb_shares[1][h], limb_shares[2][h]};
        if (holders[h] != owner) shares_sent += 3;
      }
    }
    tr.upload_bytes[owner] = shares_sent * kShareBytes;
  }

  for (UserId u : alive) {
    absl::StatusOr<FieldVector> y = MaskInput(tr.inputs[u], u, seeds[u]);
    if (!y.ok()) return y.status();
    tr.masked[u] = *std::move(y);
    tr.upload_bytes[u] += tr.dim * kElementBytes;
  }

  // Dropout recovery: alive holders reveal their shares of each seed the
  // dropout agreed with an alive neighbor.
  for (UserId d : spec.dropouts) {
    if (spec.unlearned.contains(d)) continue;
    for (const auto& [peer, unused] : seeds[d]) {
      if (spec.dropouts.contains(peer)) continue;
      const int needed = threshold_of[d];
      std::array<std::vector<ShamirShare>, 3> revealed;
      for (UserId holder : holders_of[d]) {
        if (spec.dropouts.contains(holder)) continue;
        const LimbShares& s = tr.seed_shares.at({d, peer, holder});
        for (int l = 0; l < 3; ++l) revealed[l].push_back(s[l]);
        if (static_cast<int>(revealed[0].size()) == needed) break;
      }
      std::array<FieldElement, 3> limbs;
      for (int l = 0; l < 3; ++l) {
        absl::StatusOr<FieldElement> limb =
            ReconstructSecret(field, revealed[l], needed);
        if (!limb.ok()) {
          return MakeError(ErrorKind::kReconstructionFailure,
                           limb.status().message());
        }
        limbs[l] = *limb;
      }
      tr.recovered_seeds[{d, peer}] = SeedFromLimbs(limbs);
    }
  }

  tr.aggregate = ServerAggregate(tr);
  return tr;
}

FieldVector ServerAggregate(const RoundTranscript& tr) {
  const PrimeField& field = kDefaultField;
  FieldVector z(tr.dim, FieldElement{0});
  for (const auto& [u, y] : tr.masked) field.AddInPlace(z, y);
  for (const auto& [pair, seed] : tr.recovered_seeds) {
    const auto [dropout, peer] = pair;
    const FieldVector mask = ExpandMask(seed, tr.dim);
    // The alive peer added the mask if the dropout sorts after it.
    if (dropout > peer) {
      field.SubInPlace(z, mask);
    } else {
      field.AddInPlace(z, mask);
    }
  }
  return z;
}

std::vector<PrivacyFinding> AuditPrivacy(const RoundTranscript& tr,
                                         const VertexSet& adversarial) {
  std::vector<PrivacyFinding> findings;
  const int n = static_cast<int>(tr.members.size());
  std::vector<bool> keep(n, true);
  int colluders = 0;
  for (int i = 0; i < n; ++i) {
    const UserId u = tr.members[i];
    const bool is_adversarial = adversarial.contains(u);
    colluders += is_adversarial;
    if (is_adversarial || tr.dropouts.contains(u) || tr.unlearned.contains(u)) {
      keep[i] = false;
    }
  }
  std::vector<std::vector<int>> blocks = InducedComponents(tr.graph, keep);
  if (blocks.size() > 1) {
    for (const std::vector<int>& block : blocks) {
      PrivacyFinding finding{FindingKind::kPartialSumExposure, {}};
      for (int v : block) finding.users.push_back(tr.members[v]);
      std::sort(finding.users.begin(), finding.users.end());
      findings.push_back(std::move(finding));
    }
  }
  if (colluders >= tr.threshold) {
    PrivacyFinding breach{FindingKind::kShamirBreach, {}};
    for (UserId u : tr.members) {
      if (adversarial.contains(u)) breach.users.push_back(u);
    }
    std::sort(breach.users.begin(), breach.users.end());
    findings.push_back(std::move(breach));
  }
  return findings;
}

bool VerifyTranscript(const RoundTranscript& tr) {
  if (!tr.aggregate.has_value()) return false;
  const PrimeField& field = kDefaultField;
  FieldVector expected(tr.dim, FieldElement{0});
  for (const auto& [u, x] : tr.inputs) {
    if (tr.dropouts.contains(u) || tr.unlearned.contains(u)) continue;
    if (!tr.masked.contains(u)) return false;
    field.AddInPlace(expected, x);
  }
  return ServerAggregate(tr) == expected && *tr.aggregate == expected;
}

std::string FindingKindName(FindingKind kind) {
  switch (kind) {
    case FindingKind::kPartialSumExposure:
      return "PartialSumExposure";
    case FindingKind::kShamirBreach:
      return "ShamirBreach";
  }
  return "Unknown";
}

std::string FormatTranscript(const RoundTranscript& tr) {
  size_t max_bytes = 0;
  for (const auto& [u, bytes] : tr.upload_bytes) {
    max_bytes = std::max(max_bytes, bytes);
  }
  std::string out = absl::StrFormat(
      "round cluster=%d members=%d alive=%d dropouts=%d unlearned=%d "
      "success=%s dim=%d max_upload_bytes=%d findings=%d\n",
      tr.cluster_id, tr.members.size(), tr.masked.size(), tr.dropouts.size(),
      tr.unlearned.size(), tr.aggregate.has_value() ? "true" : "false",
      tr.dim, max_bytes, tr.privacy_findings.size());
  for (const PrivacyFinding& f : tr.privacy_findings) {
    absl::StrAppend(&out, "finding cluster=", tr.cluster_id,
                    " kind=", FindingKindName(f.kind), " users=",
                    absl::StrJoin(f.users, ","), "\n");
  }
  return out;
}

std::string FormatFailedRound(ClusterId cluster_id, int members, int alive,
                              int dropouts, const absl::Status& status) {
  return absl::StrFormat(
      "round cluster=%d members=%d alive=%d dropouts=%d success=false "
      "error=\"%s\"\n",
      cluster_id, members, alive, dropouts, status.message());
}

}  // namespace cfu
