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

#include "cfu/shamir.h"

#include <set>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {

std::vector<ShamirShare> EvaluateShares(const PrimeField& field,
                                        std::span<const FieldElement> coeffs,
                                        int k) {
  std::vector<ShamirShare> shares;
  shares.reserve(k);
  for (int i = 1; i <= k; ++i) {
    const FieldElement x = field.FromUint(i);
    FieldElement y{0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      y = field.Add(field.Mul(y, x), *it);
    }
    shares.push_back({x, y});
  }
  return shares;
}

absl::StatusOr<std::vector<ShamirShare>> ShareSecret(const PrimeField& field,
                                                     FieldElement secret,
                                                     int t, int k, Rng& rng) {
  if (t < 1 || t > k || static_cast<uint64_t>(k) >= field.modulus()) {
    return MakeError(ErrorKind::kInvalidThreshold,
                     absl::StrFormat("need 1 <= t <= k < p, got t=%d k=%d", t,
                                     k));
  }
  std::vector<FieldElement> coeffs;
  coeffs.reserve(t);
  coeffs.push_back(secret);
  for (int i = 1; i < t; ++i) coeffs.push_back(field.Uniform(rng));
  return EvaluateShares(field, coeffs, k);
}

absl::StatusOr<FieldElement> ReconstructSecret(
    const PrimeField& field, std::span<const ShamirShare> shares, int t) {
  if (t < 1 || shares.size() < static_cast<size_t>(t)) {
    return MakeError(ErrorKind::kInsufficientShares,
                     absl::StrFormat("%d shares cannot meet threshold %d",
                                     shares.size(), t));
  }
  std::set<uint64_t> points;
  for (const ShamirShare& share : shares) {
    if (share.evaluation_point.value == 0 ||
        !points.insert(share.evaluation_point.value).second) {
      return MakeError(ErrorKind::kMalformedShares,
                       "evaluation points must be distinct and nonzero");
    }
  }
  // L_i(0) = prod_{j != i} x_j / (x_j - x_i).
  FieldElement secret{0};
  for (int i = 0; i < t; ++i) {
    FieldElement numerator{1};
    FieldElement denominator{1};
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      numerator = field.Mul(numerator, shares[j].evaluation_point);
      denominator = field.Mul(
          denominator, field.Sub(shares[j].evaluation_point,
                                 shares[i].evaluation_point));
    }
    const FieldElement basis = field.Mul(numerator, field.Inv(denominator));
    secret = field.Add(secret, field.Mul(shares[i].share_value, basis));
  }
  return secret;
}

}  // namespace cfu
