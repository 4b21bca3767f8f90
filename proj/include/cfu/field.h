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

#ifndef CFU_FIELD_H_
#define CFU_FIELD_H_

#include <compare>
#include <cstdint>
#include <vector>

#include "cfu/rng.h"

namespace cfu {

// Canonical representative in [0, modulus) of some PrimeField.
struct FieldElement {
  uint64_t value = 0;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

using FieldVector = std::vector<FieldElement>;

// Arithmetic modulo a prime below 2^63. The production field is the
// Mersenne prime 2^61 - 1; small primes are used in exhaustive tests.
class PrimeField {
 public:
  static constexpr uint64_t kMersenne61 = (uint64_t{1} << 61) - 1;

  explicit constexpr PrimeField(uint64_t modulus) : modulus_(modulus) {}
  static constexpr PrimeField Mersenne61() { return PrimeField(kMersenne61); }

  uint64_t modulus() const { return modulus_; }

  FieldElement FromUint(uint64_t v) const { return {v % modulus_}; }
  FieldElement FromInt(int64_t v) const;
  FieldElement Add(FieldElement a, FieldElement b) const;
  FieldElement Sub(FieldElement a, FieldElement b) const;
  FieldElement Neg(FieldElement a) const;
  FieldElement Mul(FieldElement a, FieldElement b) const;
  FieldElement Pow(FieldElement a, uint64_t e) const;
  // a must be nonzero.
  FieldElement Inv(FieldElement a) const;
  FieldElement Uniform(Rng& rng) const {
    return {UniformBelow(rng, modulus_)};
  }

  // Element-wise; both vectors must have the same size.
  void AddInPlace(FieldVector& acc, const FieldVector& v) const;
  void SubInPlace(FieldVector& acc, const FieldVector& v) const;

 private:
  uint64_t modulus_;
};

inline constexpr PrimeField kDefaultField = PrimeField::Mersenne61();

}  // namespace cfu

#endif  // CFU_FIELD_H_
