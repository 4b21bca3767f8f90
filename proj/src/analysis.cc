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

#include "cfu/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {
namespace {

double WeightedVariance(const ConvergenceParams& cp) {
  double sum = 0;
  for (size_t i = 0; i < cp.aggregation_weights.size(); ++i) {
    const double w = cp.aggregation_weights[i];
    sum += w * w * cp.grad_variance_per_user[i];
  }
  return sum;
}

}  // namespace

absl::Status ConvergenceParams::Validate() const {
  if (aggregation_weights.size() != grad_variance_per_user.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     "one variance per aggregation weight is required");
  }
  const double total = std::accumulate(aggregation_weights.begin(),
                                       aggregation_weights.end(), 0.0);
  if (!aggregation_weights.empty() && std::abs(total - 1.0) > 1e-9) {
    return MakeError(ErrorKind::kRangeError,
                     absl::StrFormat("weights sum to %.12g, not 1", total));
  }
  if (std::any_of(grad_variance_per_user.begin(), grad_variance_per_user.end(),
                  [](double v) { return v < 0; })) {
    return MakeError(ErrorKind::kRangeError, "negative gradient variance");
  }
  if (!(smoothness > 0) || !(strong_convexity > 0) || !(grad_norm_bound > 0) ||
      local_iterations < 1 || !(precision > 0) || heterogeneity_gap < 0 ||
      init_distance_sq < 0 || round_index < 0) {
    return MakeError(ErrorKind::kRangeError,
                     "convergence parameters out of range");
  }
  return absl::OkStatus();
}

double ExpectedRetrainedSequential(int64_t n, int64_t k, int64_t tau) {
  if (tau == 0) return 0.0;
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(tau);
  return (2.0 * nd + 1.0 - td * td) * static_cast<double>(k) / (2.0 * nd) -
         td;
}

double ExpectedRetrainedSequentialUpperBound(int64_t k, int64_t tau) {
  return static_cast<double>(k) * static_cast<double>(tau);
}

double ExpectedRetrainedBatch(int64_t n, int64_t k, int64_t tau) {
  const double nd = static_cast<double>(n);
  return nd - nd * std::pow(1.0 - static_cast<double>(k) / nd,
                            static_cast<double>(tau)) -
         static_cast<double>(tau);
}

double AvgCardinality(UnlearnMode mode, int64_t n, int64_t k, int64_t tau) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double td = static_cast<double>(tau);
  if (mode == UnlearnMode::kSequential) {
    return (1.0 - td / nd) * kd - (2.0 * nd + 1.0 - td * td) / (2.0 * nd * nd);
  }
  return kd + nd * (nd + td) / kd - 2.0 * nd;
}

double AvgCardinalityDefinition(UnlearnMode mode, int64_t n, int64_t k,
                                int64_t tau) {
  const double expected = mode == UnlearnMode::kSequential
                              ? ExpectedRetrainedSequential(n, k, tau)
                              : ExpectedRetrainedBatch(n, k, tau);
  const double nd = static_cast<double>(n);
  return nd * (nd - expected) / static_cast<double>(k);
}

double ConvergenceAlpha(const ConvergenceParams& cp) {
  const double e_minus_1 = cp.local_iterations - 1.0;
  return WeightedVariance(cp) +
         6.0 * cp.smoothness * cp.heterogeneity_gap +
         8.0 * e_minus_1 * e_minus_1 * cp.grad_norm_bound;
}

double ConvergenceTheta(const ConvergenceParams& cp) {
  return std::max(8.0 * cp.smoothness / cp.strong_convexity,
                  static_cast<double>(cp.local_iterations));
}

absl::StatusOr<double> ParticipationBeta(const ConvergenceParams& cp,
                                         int64_t k) {
  const double kd = static_cast<double>(k);
  const double denominator = cp.participants * (kd - 1.0);
  if (!(denominator > 0)) {
    return MakeError(ErrorKind::kDegenerateCluster,
                     absl::StrFormat("beta denominator %g is not positive",
                                     denominator));
  }
  const double e = cp.local_iterations;
  return 4.0 * (kd - cp.participants) * e * e * cp.grad_norm_bound /
         denominator;
}

absl::StatusOr<double> ModeBeta(UnlearnMode mode, const ConvergenceParams& cp,
                                int64_t n, int64_t k, int64_t tau) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double td = static_cast<double>(tau);
  const double e = cp.local_iterations;
  const double scale = 4.0 * e * e * cp.grad_norm_bound;
  double numerator = 0;
  double denominator = 0;
  if (mode == UnlearnMode::kSequential) {
    numerator = 2.0 * nd * nd * kd - 2.0 * nd * kd * (nd - td) + 2.0 * nd -
                td * td + 1.0;
    denominator =
        (kd - 1.0) * (2.0 * nd * kd * (nd - td) - 2.0 * nd + td * td - 1.0);
  } else {
    // The batch term is stated with the sequential request count; the single
    // tau argument feeds both.
    numerator = nd * (-nd + 2.0 * kd - td);
    denominator = (kd - 1.0) * (nd * (nd + td) + kd * (-2.0 * nd + kd));
  }
  if (!(denominator > 0)) {
    return MakeError(ErrorKind::kDegenerateCluster,
                     absl::StrFormat("beta denominator %g is not positive "
                                     "(N=%d, k=%d, tau=%d)",
                                     denominator, n, k, tau));
  }
  return scale * numerator / denominator;
}

double ErrorBoundWithBeta(const ConvergenceParams& cp, double beta) {
  const double theta = ConvergenceTheta(cp);
  const double mu = cp.strong_convexity;
  return cp.smoothness /
         (theta + cp.local_iterations * static_cast<double>(cp.round_index) -
          1.0) *
         (2.0 * (ConvergenceAlpha(cp) + beta) / (mu * mu) +
          theta / 2.0 * cp.init_distance_sq);
}

absl::StatusOr<double> ConvErrorBound(UnlearnMode mode,
                                      const ConvergenceParams& cp, int64_t n,
                                      int64_t k, int64_t tau) {
  if (absl::Status s = cp.Validate(); !s.ok()) return s;
  absl::StatusOr<double> beta = ModeBeta(mode, cp, n, k, tau);
  if (!beta.ok()) return beta.status();
  return ErrorBoundWithBeta(cp, *beta);
}

absl::StatusOr<double> RoundsBoundForCardinality(const ConvergenceParams& cp,
                                                 double cardinality) {
  if (!(cardinality > 0)) {
    return MakeError(ErrorKind::kDegenerateCardinality,
                     absl::StrFormat("average cardinality %g is not positive",
                                     cardinality));
  }
  const double e = cp.local_iterations;
  const double g2 = cp.grad_norm_bound;
  return (1.0 / cp.precision) *
         ((1.0 + 1.0 / cardinality) * e * g2 +
          (WeightedVariance(cp) + cp.heterogeneity_gap + g2) / e + g2);
}

absl::StatusOr<double> ConvRoundsBound(UnlearnMode mode,
                                       const ConvergenceParams& cp, int64_t n,
                                       int64_t k, int64_t tau) {
  if (absl::Status s = cp.Validate(); !s.ok()) return s;
  return RoundsBoundForCardinality(cp, AvgCardinality(mode, n, k, tau));
}

absl::StatusOr<AnalysisReport> Analyze(UnlearnMode mode,
                                       const ConvergenceParams& cp, int64_t n,
                                       int64_t k, int64_t tau) {
  AnalysisReport report;
  report.expected_retrained = mode == UnlearnMode::kSequential
                                  ? ExpectedRetrainedSequential(n, k, tau)
                                  : ExpectedRetrainedBatch(n, k, tau);
  report.avg_cardinality = AvgCardinality(mode, n, k, tau);
  absl::StatusOr<double> error = ConvErrorBound(mode, cp, n, k, tau);
  if (!error.ok()) return error.status();
  report.error_bound = *error;
  absl::StatusOr<double> rounds = ConvRoundsBound(mode, cp, n, k, tau);
  if (!rounds.ok()) return rounds.status();
  report.rounds_bound = *rounds;
  return report;
}

}  // namespace cfu
