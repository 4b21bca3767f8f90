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

#ifndef CFU_BOUNDS_H_
#define CFU_BOUNDS_H_

#include <cstdint>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cfu {

// The seven planning inputs of a clustered deployment.
struct SystemParams {
  int64_t n_users = 0;                    // N
  double frac_adversarial = 0;            // gamma
  double frac_dropout = 0;                // delta
  double frac_unlearn_per_cluster = 0;    // zeta
  double shamir_rate = 0;                 // xi
  int security_bits = 0;                  // sigma
  int correctness_bits = 0;               // eta

  // Range checks plus gamma + delta < 1 and xi > max(gamma, delta, zeta).
  absl::Status Validate() const;
};

struct ClusterSizes {
  int64_t k1 = 0;  // minimal k for Shamir security
  int64_t k2 = 0;  // minimal k for Shamir correctness
  int64_t k3 = 0;  // minimal k for connectivity security
  int64_t cluster_size = 0;
  int64_t n_clusters = 0;
};

struct ClusterPlanParams {
  int64_t cluster_size = 0;             // k
  int64_t n_clusters = 0;               // s = floor(N / k)
  int64_t shamir_threshold = 0;         // t = ceil(xi * k)
  int64_t max_unlearn_per_cluster = 0;  // q = floor(zeta * k)
  // Empty when the corresponding capacity guard does not hold.
  std::optional<int64_t> capacity_seq;
  std::optional<int64_t> capacity_bat;
};

struct ParGenResult {
  ClusterSizes sizes;
  ClusterPlanParams plan;
  double seq_guard = 0;        // zeta must stay below this
  double bat_denominator = 0;  // must be positive
  absl::Status seq_status;     // OK or GuardViolation
  absl::Status bat_status;     // OK or GuardViolation
};

// Left-hand sides of the three cluster-size inequalities.
// A requirement holds at k iff the margin is >= 0.
absl::StatusOr<double> ShamirSecurityMargin(int64_t k, const SystemParams& p);
absl::StatusOr<double> ShamirCorrectnessMargin(int64_t k,
                                               const SystemParams& p);
double ConnectivityMargin(int64_t k, const SystemParams& p);

// Ascending scan over k in [1, N] for each inequality.
absl::StatusOr<ClusterSizes> MinClusterSize(const SystemParams& p);

// t = ceil(xi k) and q = floor(zeta k), both with a 1e-9 tolerance so that
// products such as 0.7 * 10 round to the intended integer.
int64_t ShamirThreshold(double xi, int64_t k);
int64_t UnlearnBudget(double zeta, int64_t k);

// sqrt(N^2 sigma ln2 / (2 k^4)); the sequential capacity is only valid for
// zeta below this value.
double SequentialCapacityGuard(int64_t n, int64_t k, int sigma);
// floor(sqrt(N^3 sigma ln2 / (2 k^3))).
absl::StatusOr<int64_t> CapacitySequential(int64_t n, int64_t k, double zeta,
                                           int sigma);

// N^2/k^2 - 2 sigma ln2 + 2 ln(N/k).
double BatchCapacityDenominator(int64_t n, int64_t k, int sigma);
// floor(N^2 zeta^2 / denominator); GuardViolation if denominator <= 0.
absl::StatusOr<int64_t> CapacityBatch(int64_t n, int64_t k, double zeta,
                                      int sigma);

// Full parameter generation. Infeasible cluster sizes are errors; capacity
// guard violations are reported in the result's per-mode statuses.
absl::StatusOr<ParGenResult> ParGen(const SystemParams& p);

// Probability that some cluster receives more than q of tau sequential
// requests, using the per-cluster binomial product form. Evaluated in log
// space and clamped to [0, 1].
double ProbExceedSequential(int64_t s, int64_t tau, int64_t q);

// The batch exceedance formula with exact big-integer binomials.
// Raw keeps the unclamped value so out-of-range evaluations can be reported.
double ProbExceedBatchRaw(int64_t s, int64_t tau, int64_t q);
double ProbExceedBatch(int64_t s, int64_t tau, int64_t q);

struct TailQuery {
  int64_t population = 0;    // N
  double feature_fraction = 0;  // p
  double draw_fraction = 0;     // r
  double deviation = 0;         // w
};

// exp(-2 w^2 r N): upper bound for Pr[X >= (p + w) r N], X ~ HG(N, pN, rN).
double HypergeometricTailBound(const TailQuery& query);

}  // namespace cfu

#endif  // CFU_BOUNDS_H_
