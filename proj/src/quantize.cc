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

#include "cfu/quantize.h"

#include <cmath>

#include "absl/strings/str_format.h"
#include "cfu/status.h"

namespace cfu {

absl::StatusOr<FieldVector> Quantize(std::span<const double> v,
                                     int scale_bits) {
  const double scale = std::ldexp(1.0, scale_bits);
  FieldVector out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || std::abs(v[i]) >= kQuantizationHeadroom) {
      return MakeError(ErrorKind::kQuantizationOverflow,
                       absl::StrFormat("element %d = %g exceeds headroom", i,
                                       v[i]));
    }
    out.push_back(kDefaultField.FromInt(std::llround(v[i] * scale)));
  }
  return out;
}

std::vector<double> Dequantize(const FieldVector& v, int scale_bits) {
  const double inv_scale = std::ldexp(1.0, -scale_bits);
  constexpr uint64_t kHalf = PrimeField::kMersenne61 / 2;
  std::vector<double> out;
  out.reserve(v.size());
  for (const FieldElement& e : v) {
    const int64_t signed_value =
        e.value > kHalf
            ? -static_cast<int64_t>(PrimeField::kMersenne61 - e.value)
            : static_cast<int64_t>(e.value);
    out.push_back(static_cast<double>(signed_value) * inv_scale);
  }
  return out;
}

}  // namespace cfu
