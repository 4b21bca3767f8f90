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

#ifndef CFU_MASKING_H_
#define CFU_MASKING_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "cfu/field.h"

namespace cfu {

using UserId = int;

// 128-bit pairwise seed.
struct Seed {
  std::array<uint8_t, 16> bytes{};
  friend auto operator<=>(const Seed&, const Seed&) = default;
};

using Nonce = std::array<uint8_t, 16>;

Nonce NonceFromUint(uint64_t value);

// Simulated key agreement: BLAKE2b keyed by the session nonce over
// (min(i, j), max(i, j)). Symmetric; SelfPairing when i == j.
absl::StatusOr<Seed> AgreeSeed(UserId i, UserId j, const Nonce& nonce);

// ChaCha20 keystream (key = BLAKE2b-256(seed)) read as little-endian 64-bit
// words, truncated to 61 bits and rejection-sampled into [0, 2^61 - 1).
FieldVector ExpandMask(const Seed& seed, size_t dim);

// x + sum_{j > self} PRG(s_j) - sum_{j < self} PRG(s_j) over the default
// field. SelfPairing if self_id appears among the neighbors.
absl::StatusOr<FieldVector> MaskInput(
    const FieldVector& x, UserId self_id,
    const std::map<UserId, Seed>& neighbor_seeds);

// A seed does not fit in one field element; it is split into three limbs of
// at most 48 bits that are shared independently.
std::array<FieldElement, 3> SeedToLimbs(const Seed& seed);
Seed SeedFromLimbs(const std::array<FieldElement, 3>& limbs);

// Test-vector file layout: 16-byte seed, 4-byte little-endian dim, then dim
// little-endian 8-byte field elements.
struct MaskVector {
  Seed seed;
  FieldVector elements;
};
std::string EncodeMaskVector(const MaskVector& v);
absl::StatusOr<MaskVector> DecodeMaskVector(absl::string_view bytes);

}  // namespace cfu

#endif  // CFU_MASKING_H_
