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

#include "cfu/field.h"

namespace cfu {

FieldElement PrimeField::FromInt(int64_t v) const {
  const int64_t m = static_cast<int64_t>(modulus_);
  int64_t r = v % m;
  if (r < 0) r += m;
  return {static_cast<uint64_t>(r)};
}

FieldElement PrimeField::Add(FieldElement a, FieldElement b) const {
  uint64_t s = a.value + b.value;
  if (s >= modulus_) s -= modulus_;
  return {s};
}

FieldElement PrimeField::Sub(FieldElement a, FieldElement b) const {
  return {a.value >= b.value ? a.value - b.value
                             : a.value + modulus_ - b.value};
}

FieldElement PrimeField::Neg(FieldElement a) const {
  return {a.value == 0 ? 0 : modulus_ - a.value};
}

FieldElement PrimeField::Mul(FieldElement a, FieldElement b) const {
  const unsigned __int128 product =
      static_cast<unsigned __int128>(a.value) * b.value;
  if (modulus_ == kMersenne61) {
    uint64_t r = static_cast<uint64_t>(product & kMersenne61) +
                 static_cast<uint64_t>(product >> 61);
    if (r >= kMersenne61) r -= kMersenne61;
    if (r >= kMersenne61) r -= kMersenne61;
    return {r};
  }
  return {static_cast<uint64_t>(product % modulus_)};
}

FieldElement PrimeField::Pow(FieldElement a, uint64_t e) const {
  FieldElement result{1 % modulus_};
  while (e > 0) {
    if (e & 1) result = Mul(result, a);
    a = Mul(a, a);
    e >>= 1;
  }
  return result;
}

FieldElement PrimeField::Inv(FieldElement a) const {
  return Pow(a, modulus_ - 2);
}

void PrimeField::AddInPlace(FieldVector& acc, const FieldVector& v) const {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = Add(acc[i], v[i]);
}

void PrimeField::SubInPlace(FieldVector& acc, const FieldVector& v) const {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = Sub(acc[i], v[i]);
}

}  // namespace cfu
