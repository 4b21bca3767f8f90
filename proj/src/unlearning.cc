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

#include <algorithm>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {

absl::StatusOr<UnlearnState> UnlearnState::Create(
    const ClusterPlanParams& plan, ClusterAssignment assignment,
    UnlearnMode mode) {
  if (absl::Status s = assignment.Validate(); !s.ok()) return s;
  const std::optional<int64_t>& capacity =
      mode == UnlearnMode::kSequential ? plan.capacity_seq : plan.capacity_bat;
  if (!capacity.has_value()) {
    return MakeError(ErrorKind::kGuardViolation,
                     "plan has no unlearning capacity for this mode");
  }
  return UnlearnState(plan, std::move(assignment), mode, *capacity);
}

UnlearnState::UnlearnState(const ClusterPlanParams& plan,
                           ClusterAssignment assignment, UnlearnMode mode,
                           int64_t capacity)
    : plan_(plan),
      assignment_(std::move(assignment)),
      mode_(mode),
      capacity_(capacity),
      removed_(assignment_.n_clusters(), 0),
      unlearned_(assignment_.n_users(), false) {}

std::vector<UserId> UnlearnState::RemainingMembers(ClusterId c) const {
  std::vector<UserId> out;
  for (UserId u : assignment_.members[c]) {
    if (!unlearned_[u]) out.push_back(u);
  }
  return out;
}

absl::Status UnlearnState::CheckTarget(UserId target) const {
  if (target < 0 || target >= assignment_.n_users()) {
    return MakeError(ErrorKind::kUnknownUser,
                     absl::StrFormat("user %d", target));
  }
  if (unlearned_[target]) {
    return MakeError(ErrorKind::kAlreadyUnlearned,
                     absl::StrFormat("user %d", target));
  }
  return absl::OkStatus();
}

absl::StatusOr<RetrainJob> UnlearnState::ProcessSequential(UserId target) {
  if (mode_ != UnlearnMode::kSequential) {
    return MakeError(ErrorKind::kInvalidArgument, "state is in batch mode");
  }
  if (requests_consumed_ >= capacity_) {
    return MakeError(ErrorKind::kCapacityExhausted,
                     absl::StrFormat("%d of %d requests consumed",
                                     requests_consumed_, capacity_));
  }
  if (absl::Status s = CheckTarget(target); !s.ok()) return s;

  // A well-formed request counts against the capacity whether or not the
  // cluster budget admits it.
  const int64_t index = next_request_index_++;
  ++requests_consumed_;
  const ClusterId c = assignment_.cluster_of[target];
  if (removed_[c] + 1 > plan_.max_unlearn_per_cluster) {
    log_.push_back({index, mode_, c, 0, removed_[c], false});
    return MakeError(
        ErrorKind::kPerClusterBudgetExceeded,
        absl::StrFormat("cluster %d already has %d of %d removals", c,
                        removed_[c], plan_.max_unlearn_per_cluster));
  }
  unlearned_[target] = true;
  ++removed_[c];
  RetrainJob job{c, RemainingMembers(c)};
  log_.push_back({index, mode_, c, job.users_retrained(), removed_[c], true});
  return job;
}

absl::StatusOr<std::vector<RetrainJob>> UnlearnState::ProcessBatch(
    const std::vector<UserId>& targets) {
  if (mode_ != UnlearnMode::kBatch) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "state is in sequential mode");
  }
  std::set<UserId> distinct;
  for (UserId u : targets) {
    if (!distinct.insert(u).second) {
      return MakeError(ErrorKind::kDuplicateTarget,
                       absl::StrFormat("user %d", u));
    }
  }
  if (requests_consumed_ + static_cast<int64_t>(targets.size()) > capacity_) {
    return MakeError(
        ErrorKind::kCapacityExhausted,
        absl::StrFormat("%d consumed plus %d requested exceeds %d",
                        requests_consumed_, targets.size(), capacity_));
  }
  for (UserId u : targets) {
    if (absl::Status s = CheckTarget(u); !s.ok()) return s;
  }
  if (targets.empty()) return std::vector<RetrainJob>{};

  std::map<ClusterId, int> hits;
  for (UserId u : targets) ++hits[assignment_.cluster_of[u]];
  const int64_t index = next_request_index_++;
  requests_consumed_ += static_cast<int64_t>(targets.size());

  // All or nothing: one over-budget cluster rejects the whole batch.
  std::vector<ClusterId> over;
  for (const auto& [c, n] : hits) {
    if (removed_[c] + n > plan_.max_unlearn_per_cluster) over.push_back(c);
  }
  if (!over.empty()) {
    for (ClusterId c : over) {
      log_.push_back({index, mode_, c, 0, removed_[c], false});
    }
    return MakeError(
        ErrorKind::kPerClusterBudgetExceeded,
        absl::StrFormat("%d cluster(s) would exceed %d removals, first %d",
                        over.size(), plan_.max_unlearn_per_cluster,
                        over.front()));
  }

  std::vector<RetrainJob> jobs;
  for (UserId u : targets) unlearned_[u] = true;
  for (const auto& [c, n] : hits) {
    removed_[c] += n;
    RetrainJob job{c, RemainingMembers(c)};
    log_.push_back({index, mode_, c, job.users_retrained(), removed_[c], true});
    jobs.push_back(std::move(job));
  }
  return jobs;
}

RetrainedStatistics ComputeRetrainedStatistics(const UnlearnState& state) {
  RetrainedStatistics stats;
  for (const RetrainLogEntry& e : state.retrain_log()) {
    if (e.accepted) {
      stats.total_retrained += e.users_retrained;
    } else {
      ++stats.rejected;
    }
  }
  for (int q : state.removed_per_cluster()) {
    ++stats.q_histogram[q];
    stats.max_q = std::max(stats.max_q, q);
  }
  return stats;
}

std::string RetrainLogCsv(const std::vector<RetrainLogEntry>& log) {
  std::string out =
      "request_index,mode,cluster_id,users_retrained,q_i_after,accepted\n";
  for (const RetrainLogEntry& e : log) {
    absl::StrAppend(&out, e.request_index, ",",
                    e.mode == UnlearnMode::kSequential ? "seq" : "bat", ",",
                    e.cluster_id, ",", e.users_retrained, ",", e.q_after, ",",
                    e.accepted ? "true" : "false", "\n");
  }
  return out;
}

}  // namespace cfu
