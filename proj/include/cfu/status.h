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

#ifndef CFU_STATUS_H_
#define CFU_STATUS_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace cfu {

// Domain error kinds. Every non-OK status produced by this library carries
// exactly one of these as a payload, so callers can branch on the kind
// without parsing messages.
enum class ErrorKind {
  kInfeasibleParameters,
  kGuardViolation,
  kClusterTooSmall,
  kInvalidDegree,
  kInvalidThreshold,
  kInsufficientShares,
  kMalformedShares,
  kSelfPairing,
  kDimensionMismatch,
  kQuantizationOverflow,
  kReconstructionFailure,
  kCapacityExhausted,
  kUnknownUser,
  kAlreadyUnlearned,
  kPerClusterBudgetExceeded,
  kDuplicateTarget,
  kDegenerateCluster,
  kDegenerateCardinality,
  kDivergence,
  kMissingKey,
  kUnknownKey,
  kDuplicateKey,
  kRangeError,
  kInvalidArgument,
};

absl::string_view ErrorKindName(ErrorKind kind);

// Builds a status whose canonical code is derived from `kind`.
absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the kind attached by MakeError, or nullopt for OK / foreign
// statuses.
std::optional<ErrorKind> KindOf(const absl::Status& status);

inline bool IsKind(const absl::Status& status, ErrorKind kind) {
  return KindOf(status) == kind;
}

}  // namespace cfu

#endif  // CFU_STATUS_H_
