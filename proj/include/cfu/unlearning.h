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

#ifndef CFU_UNLEARNING_H_
#define CFU_UNLEARNING_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/analysis.h"
#include "cfu/bounds.h"
#include "cfu/cohort.h"

namespace cfu {

// Retraining work for one cluster: the members left after removal.
struct RetrainJob {
  ClusterId cluster_id = 0;
  std::vector<UserId> members;
  int users_retrained() const { return static_cast<int>(members.size()); }
};

struct RetrainLogEntry {
  // Index of the sequential request or of the batch.
  int64_t request_index = 0;
  UnlearnMode mode = UnlearnMode::kSequential;
  ClusterId cluster_id = 0;
  int users_retrained = 0;
  int q_after = 0;
  bool accepted = false;
};

struct RetrainedStatistics {
  int64_t total_retrained = 0;
  // q_i value -> number of clusters with that many removals.
  std::map<int, int> q_histogram;
  int max_q = 0;
  int64_t rejected = 0;
};

// Unlearning bookkeeping for one clustering. Requests are serialized: a
// request is fully retrained before the next one is admitted. Every
// well-formed request consumes capacity, including ones a cluster budget
// rejects.
class UnlearnState {
 public:
  // The capacity for `mode` must be present in `plan`.
  static absl::StatusOr<UnlearnState> Create(const ClusterPlanParams& plan,
                                             ClusterAssignment assignment,
                                             UnlearnMode mode);

  absl::StatusOr<RetrainJob> ProcessSequential(UserId target);
  absl::StatusOr<std::vector<RetrainJob>> ProcessBatch(
      const std::vector<UserId>& targets);

  const ClusterPlanParams& plan() const { return plan_; }
  const ClusterAssignment& assignment() const { return assignment_; }
  UnlearnMode mode() const { return mode_; }
  int64_t capacity() const { return capacity_; }
  int64_t requests_consumed() const { return requests_consumed_; }
  const std::vector<int>& removed_per_cluster() const { return removed_; }
  const std::vector<RetrainLogEntry>& retrain_log() const { return log_; }
  bool is_unlearned(UserId u) const { return unlearned_[u]; }
  const std::vector<bool>& unlearned() const { return unlearned_; }
  std::vector<UserId> RemainingMembers(ClusterId c) const;

 private:
  UnlearnState(const ClusterPlanParams& plan, ClusterAssignment assignment,
               UnlearnMode mode, int64_t capacity);

  absl::Status CheckTarget(UserId target) const;

  ClusterPlanParams plan_;
  ClusterAssignment assignment_;
  UnlearnMode mode_;
  int64_t capacity_;
  int64_t requests_consumed_ = 0;
  int64_t next_request_index_ = 0;
  std::vector<int> removed_;  // q_i
  std::vector<bool> unlearned_;
  std::vector<RetrainLogEntry> log_;
};

RetrainedStatistics ComputeRetrainedStatistics(const UnlearnState& state);

// Header plus one row per log entry.
std::string RetrainLogCsv(const std::vector<RetrainLogEntry>& log);

}  // namespace cfu

#endif  // CFU_UNLEARNING_H_
