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

#include "cfu/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kRoundingSlack = 1e-9;

bool InUnitInterval(double v) { return v >= 0.0 && v < 1.0; }

cpp_int Binomial(int64_t n, int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  cpp_int result = 1;
  for (int64_t i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

double LogBinomialPmf(int64_t n, int64_t x, double log_p, double log_1mp) {
  return std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
         std::lgamma(n - x + 1.0) + x * log_p + (n - x) * log_1mp;
}

}  // namespace

absl::Status SystemParams::Validate() const {
  if (n_users < 1) {
    return MakeError(ErrorKind::kRangeError,
                     absl::StrFormat("n_users must be positive, got %d",
                                     n_users));
  }
  if (!InUnitInterval(frac_adversarial) || !InUnitInterval(frac_dropout) ||
      !InUnitInterval(frac_unlearn_per_cluster)) {
    return MakeError(ErrorKind::kRangeError,
                     "gamma, delta and zeta must lie in [0, 1)");
  }
  if (!(shamir_rate > 0.0 && shamir_rate < 1.0)) {
    return MakeError(ErrorKind::kRangeError, "xi must lie in (0, 1)");
  }
  if (security_bits < 0 || correctness_bits < 0) {
    return MakeError(ErrorKind::kRangeError,
                     "sigma and eta must be nonnegative");
  }
  if (frac_adversarial + frac_dropout >= 1.0) {
    return MakeError(ErrorKind::kInfeasibleParameters,
                     absl::StrFormat("gamma + delta = %g must be below 1",
                                     frac_adversarial + frac_dropout));
  }
  if (shamir_rate <= frac_adversarial || shamir_rate <= frac_dropout ||
      shamir_rate <= frac_unlearn_per_cluster) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("xi = %g must exceed gamma, delta and zeta",
                        shamir_rate));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ShamirSecurityMargin(int64_t k, const SystemParams& p) {
  const double gamma = p.frac_adversarial;
  const double xi = p.shamir_rate;
  if (xi <= gamma) {
    return MakeError(ErrorKind::kInfeasibleParameters,
                     absl::StrFormat("xi = %g does not exceed gamma = %g", xi,
                                     gamma));
  }
  const double kd = static_cast<double>(k);
  return 2.0 * (gamma * gamma + xi * xi - 2.0 * xi * gamma) * kd +
         (std::log(kd) - std::log(static_cast<double>(p.n_users)) -
          p.security_bits * kLn2);
}

absl::StatusOr<double> ShamirCorrectnessMargin(int64_t k,
                                               const SystemParams& p) {
  const double delta = p.frac_dropout;
  const double xi = p.shamir_rate;
  const double zeta = p.frac_unlearn_per_cluster;
  if (xi <= delta || xi <= zeta) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("xi = %g must exceed delta = %g and zeta = %g", xi,
                        delta, zeta));
  }
  const double kd = static_cast<double>(k);
  return 2.0 *
             ((1.0 - delta) * (1.0 - delta) + xi * xi -
              2.0 * (xi + zeta) * delta + 2.0 * xi + 2.0 * zeta) *
             kd +
         (std::log(kd) - std::log(static_cast<double>(p.n_users)) -
          p.correctness_bits * kLn2);
}

double ConnectivityMargin(int64_t k, const SystemParams& p) {
  const double kd = static_cast<double>(k);
  const double removed = p.frac_adversarial + p.frac_dropout +
                         p.frac_unlearn_per_cluster;
  return -std::log(kd) * std::log(kd * removed) +
         2.0 * p.security_bits * kLn2;
}

absl::StatusOr<ClusterSizes> MinClusterSize(const SystemParams& p) {
  if (absl::Status s = p.Validate(); !s.ok()) return s;

  ClusterSizes sizes;
  for (int64_t k = 1; k <= p.n_users && sizes.k1 == 0; ++k) {
    absl::StatusOr<double> f1 = ShamirSecurityMargin(k, p);
    if (!f1.ok()) return f1.status();
    if (*f1 >= 0) sizes.k1 = k;
  }
  if (sizes.k1 == 0) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("no cluster size k <= N = %d satisfies the Shamir "
                        "security requirement (R1)",
                        p.n_users));
  }
  for (int64_t k = 1; k <= p.n_users && sizes.k2 == 0; ++k) {
    absl::StatusOr<double> f2 = ShamirCorrectnessMargin(k, p);
    if (!f2.ok()) return f2.status();
    if (*f2 >= 0) sizes.k2 = k;
  }
  if (sizes.k2 == 0) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("no cluster size k <= N = %d satisfies the Shamir "
                        "correctness requirement (R2)",
                        p.n_users));
  }
  for (int64_t k = 1; k <= p.n_users && sizes.k3 == 0; ++k) {
    if (ConnectivityMargin(k, p) >= 0) sizes.k3 = k;
  }
  if (sizes.k3 == 0) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("no cluster size k <= N = %d satisfies the "
                        "connectivity requirement (R3)",
                        p.n_users));
  }
  sizes.cluster_size = std::max({sizes.k1, sizes.k2, sizes.k3});
  sizes.n_clusters = p.n_users / sizes.cluster_size;
  return sizes;
}

int64_t ShamirThreshold(double xi, int64_t k) {
  return static_cast<int64_t>(std::ceil(xi * k - kRoundingSlack));
}

int64_t UnlearnBudget(double zeta, int64_t k) {
  return static_cast<int64_t>(std::floor(zeta * k + kRoundingSlack));
}

double SequentialCapacityGuard(int64_t n, int64_t k, int sigma) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::sqrt(nd * nd * sigma * kLn2 / (2.0 * kd * kd * kd * kd));
}

absl::StatusOr<int64_t> CapacitySequential(int64_t n, int64_t k, double zeta,
                                           int sigma) {
  if (sigma == 0) return 0;
  const double guard = SequentialCapacityGuard(n, k, sigma);
  if (!(zeta < guard)) {
    return MakeError(
        ErrorKind::kGuardViolation,
        absl::StrFormat("sequential capacity requires zeta < %.6g, got %g",
                        guard, zeta));
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return static_cast<int64_t>(
      std::floor(std::sqrt(nd * nd * nd * sigma * kLn2 /
                           (2.0 * kd * kd * kd))));
}

double BatchCapacityDenominator(int64_t n, int64_t k, int sigma) {
  const double ratio = static_cast<double>(n) / static_cast<double>(k);
  return ratio * ratio - 2.0 * sigma * kLn2 + 2.0 * std::log(ratio);
}

absl::StatusOr<int64_t> CapacityBatch(int64_t n, int64_t k, double zeta,
                                      int sigma) {
  const double denominator = BatchCapacityDenominator(n, k, sigma);
  if (!(denominator > 0)) {
    return MakeError(
        ErrorKind::kGuardViolation,
        absl::StrFormat("batch capacity denominator %.6g is not positive",
                        denominator));
  }
  const double nd = static_cast<double>(n);
  return static_cast<int64_t>(
      std::floor(nd * nd * zeta * zeta / denominator));
}

absl::StatusOr<ParGenResult> ParGen(const SystemParams& p) {
  absl::StatusOr<ClusterSizes> sizes = MinClusterSize(p);
  if (!sizes.ok()) return sizes.status();

  ParGenResult result;
  result.sizes = *sizes;
  ClusterPlanParams& plan = result.plan;
  plan.cluster_size = sizes->cluster_size;
  plan.n_clusters = sizes->n_clusters;
  plan.shamir_threshold = ShamirThreshold(p.shamir_rate, plan.cluster_size);
  plan.max_unlearn_per_cluster =
      UnlearnBudget(p.frac_unlearn_per_cluster, plan.cluster_size);
  if (plan.shamir_threshold >= plan.cluster_size) {
    return MakeError(
        ErrorKind::kInfeasibleParameters,
        absl::StrFormat("threshold t = %d is not below cluster size k = %d",
                        plan.shamir_threshold, plan.cluster_size));
  }

  result.seq_guard =
      SequentialCapacityGuard(p.n_users, plan.cluster_size, p.security_bits);
  result.bat_denominator =
      BatchCapacityDenominator(p.n_users, plan.cluster_size, p.security_bits);

  absl::StatusOr<int64_t> seq =
      CapacitySequential(p.n_users, plan.cluster_size,
                         p.frac_unlearn_per_cluster, p.security_bits);
  if (seq.ok()) {
    plan.capacity_seq = *seq;
  } else {
    result.seq_status = seq.status();
  }
  absl::StatusOr<int64_t> bat =
      CapacityBatch(p.n_users, plan.cluster_size, p.frac_unlearn_per_cluster,
                    p.security_bits);
  if (bat.ok()) {
    plan.capacity_bat = *bat;
  } else {
    result.bat_status = bat.status();
  }
  return result;
}

double ProbExceedSequential(int64_t s, int64_t tau, int64_t q) {
  if (tau <= q) return 0.0;
  if (s == 1) return 1.0;  // every request lands in the single cluster

  const double log_p = -std::log(static_cast<double>(s));
  const double log_1mp = std::log1p(-1.0 / static_cast<double>(s));
  double max_term = -std::numeric_limits<double>::infinity();
  for (int64_t x = 0; x <= q; ++x) {
    max_term = std::max(max_term, LogBinomialPmf(tau, x, log_p, log_1mp));
  }
  double acc = 0.0;
  for (int64_t x = 0; x <= q; ++x) {
    acc += std::exp(LogBinomialPmf(tau, x, log_p, log_1mp) - max_term);
  }
  const double log_cdf = std::min(0.0, max_term + std::log(acc));
  const double value = -std::expm1(static_cast<double>(s) * log_cdf);
  return std::clamp(value, 0.0, 1.0);
}

double ProbExceedBatchRaw(int64_t s, int64_t tau, int64_t q) {
  if (tau == 0) return 0.0;
  cpp_int numerator = Binomial(tau + s - 1, s - 1);
  for (int64_t i = 1; i <= s - q; ++i) {
    numerator -= Binomial(tau + s - 1 - i, s - 1 - i);
  }
  cpp_int denominator = boost::multiprecision::pow(cpp_int(s),
                                                   static_cast<unsigned>(tau));
  return cpp_rational(numerator, denominator).convert_to<double>();
}

double ProbExceedBatch(int64_t s, int64_t tau, int64_t q) {
  return std::clamp(ProbExceedBatchRaw(s, tau, q), 0.0, 1.0);
}

double HypergeometricTailBound(const TailQuery& query) {
  return std::exp(-2.0 * query.deviation * query.deviation *
                  query.draw_fraction *
                  static_cast<double>(query.population));
}

}  // namespace cfu
