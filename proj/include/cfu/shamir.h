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

#ifndef CFU_SHAMIR_H_
#define CFU_SHAMIR_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/field.h"
#include "cfu/rng.h"

namespace cfu {

struct ShamirShare {
  FieldElement evaluation_point;  // nonzero x-coordinate
  FieldElement share_value;
  friend bool operator==(const ShamirShare&, const ShamirShare&) = default;
};

// Evaluates the polynomial with the given coefficients (constant term first)
// at x = 1..k.
std::vector<ShamirShare> EvaluateShares(const PrimeField& field,
                                        std::span<const FieldElement> coeffs,
                                        int k);

// t-out-of-k sharing of `secret` with a uniformly random degree t-1
// polynomial. InvalidThreshold unless 1 <= t <= k < modulus.
absl::StatusOr<std::vector<ShamirShare>> ShareSecret(const PrimeField& field,
                                                     FieldElement secret,
                                                     int t, int k, Rng& rng);

// Lagrange interpolation at zero of the first t shares.
absl::StatusOr<FieldElement> ReconstructSecret(
    const PrimeField& field, std::span<const ShamirShare> shares, int t);

}  // namespace cfu

#endif  // CFU_SHAMIR_H_
