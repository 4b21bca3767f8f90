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

#ifndef CFU_QUANTIZE_H_
#define CFU_QUANTIZE_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/field.h"

namespace cfu {

inline constexpr int kDefaultScaleBits = 16;
// Inputs must stay below 2^20 in magnitude so that sums over up to 2^20
// users remain inside the field's signed range.
inline constexpr double kQuantizationHeadroom = 1 << 20;

// Round-to-nearest fixed point; negatives map to the upper half of the
// default field. QuantizationOverflow when |v_i| >= 2^20.
absl::StatusOr<FieldVector> Quantize(std::span<const double> v,
                                     int scale_bits = kDefaultScaleBits);

std::vector<double> Dequantize(const FieldVector& v,
                               int scale_bits = kDefaultScaleBits);

}  // namespace cfu

#endif  // CFU_QUANTIZE_H_
