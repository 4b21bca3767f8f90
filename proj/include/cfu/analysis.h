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

#ifndef CFU_ANALYSIS_H_
#define CFU_ANALYSIS_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cfu {

enum class UnlearnMode { kSequential, kBatch };

// Inputs of the FedAvg convergence bound for strongly convex smooth losses.
struct ConvergenceParams {
  double smoothness = 1;                     // rho
  double strong_convexity = 1;               // mu
  std::vector<double> grad_variance_per_user;  // lambda_i^2
  double grad_norm_bound = 1;                // G^2
  int local_iterations = 1;                  // E
  std::vector<double> aggregation_weights;   // w_i
  double heterogeneity_gap = 0;              // Gamma
  double precision = 1;                      // epsilon
  int64_t round_index = 0;                   // j
  double init_distance_sq = 0;               // E||x0 - x*||^2
  double participants = 1;                   // K, or an average cardinality

  // Weights sum to 1 within 1e-9, variances nonnegative, sizes agree.
  absl::Status Validate() const;
};

struct AnalysisReport {
  double expected_retrained = 0;
  double avg_cardinality = 0;
  double error_bound = 0;
  double rounds_bound = 0;
};

// Expected number of users retrained after tau sequential requests. Returns 0
// for tau = 0; otherwise (2N + 1 - tau^2) k / (2N) - tau.
double ExpectedRetrainedSequential(int64_t n, int64_t k, int64_t tau);
// The stated upper bound k * tau for the sequential case.
double ExpectedRetrainedSequentialUpperBound(int64_t k, int64_t tau);
// N - N (1 - k/N)^tau - tau.
double ExpectedRetrainedBatch(int64_t n, int64_t k, int64_t tau);

// Closed forms:
//   seq: (1 - tau/N) k - (2N + 1 - tau^2) / (2 N^2)
//   bat: k + N (N + tau) / k - 2N
double AvgCardinality(UnlearnMode mode, int64_t n, int64_t k, int64_t tau);
// The defining form N (N - E_mode) / k, kept alongside for comparison.
double AvgCardinalityDefinition(UnlearnMode mode, int64_t n, int64_t k,
                                int64_t tau);

// sum_i w_i^2 lambda_i^2 + 6 rho Gamma + 8 (E - 1)^2 G^2.
double ConvergenceAlpha(const ConvergenceParams& cp);
// max(8 rho / mu, E).
double ConvergenceTheta(const ConvergenceParams& cp);

// Participation penalty for a k-user cluster with `participants` users per
// round: 4 (k - K) E^2 G^2 / (K (k - 1)).
absl::StatusOr<double> ParticipationBeta(const ConvergenceParams& cp,
                                         int64_t k);
// The mode-specific beta terms with the cardinality substituted in.
absl::StatusOr<double> ModeBeta(UnlearnMode mode, const ConvergenceParams& cp,
                                int64_t n, int64_t k, int64_t tau);

// rho / (theta + E j - 1) * (2 (alpha + beta) / mu^2 + theta / 2 * d0).
double ErrorBoundWithBeta(const ConvergenceParams& cp, double beta);
absl::StatusOr<double> ConvErrorBound(UnlearnMode mode,
                                      const ConvergenceParams& cp, int64_t n,
                                      int64_t k, int64_t tau);

// (1/eps) ((1 + 1/H) E G^2 + (sum w^2 lambda^2 + Gamma + G^2) / E + G^2),
// big-O constant taken as 1.
absl::StatusOr<double> RoundsBoundForCardinality(const ConvergenceParams& cp,
                                                 double cardinality);
absl::StatusOr<double> ConvRoundsBound(UnlearnMode mode,
                                       const ConvergenceParams& cp, int64_t n,
                                       int64_t k, int64_t tau);

absl::StatusOr<AnalysisReport> Analyze(UnlearnMode mode,
                                       const ConvergenceParams& cp, int64_t n,
                                       int64_t k, int64_t tau);

}  // namespace cfu

#endif  // CFU_ANALYSIS_H_
