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

#include "cfu/status.h"

#include <string>

#include "absl/strings/cord.h"

namespace cfu {
namespace {

constexpr absl::string_view kKindPayloadUrl = "type.cfu/error_kind";

constexpr ErrorKind kAllKinds[] = {
    ErrorKind::kInfeasibleParameters,  ErrorKind::kGuardViolation,
    ErrorKind::kClusterTooSmall,       ErrorKind::kInvalidDegree,
    ErrorKind::kInvalidThreshold,      ErrorKind::kInsufficientShares,
    ErrorKind::kMalformedShares,       ErrorKind::kSelfPairing,
    ErrorKind::kDimensionMismatch,     ErrorKind::kQuantizationOverflow,
    ErrorKind::kReconstructionFailure, ErrorKind::kCapacityExhausted,
    ErrorKind::kUnknownUser,           ErrorKind::kAlreadyUnlearned,
    ErrorKind::kPerClusterBudgetExceeded, ErrorKind::kDuplicateTarget,
    ErrorKind::kDegenerateCluster,     ErrorKind::kDegenerateCardinality,
    ErrorKind::kDivergence,            ErrorKind::kMissingKey,
    ErrorKind::kUnknownKey,            ErrorKind::kDuplicateKey,
    ErrorKind::kRangeError,            ErrorKind::kInvalidArgument,
};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInfeasibleParameters:
    case ErrorKind::kGuardViolation:
    case ErrorKind::kClusterTooSmall:
    case ErrorKind::kDegenerateCluster:
    case ErrorKind::kDegenerateCardinality:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kCapacityExhausted:
    case ErrorKind::kPerClusterBudgetExceeded:
      return absl::StatusCode::kResourceExhausted;
    case ErrorKind::kReconstructionFailure:
    case ErrorKind::kInsufficientShares:
      return absl::StatusCode::kAborted;
    case ErrorKind::kUnknownUser:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kAlreadyUnlearned:
    case ErrorKind::kDuplicateTarget:
    case ErrorKind::kDuplicateKey:
      return absl::StatusCode::kAlreadyExists;
    case ErrorKind::kRangeError:
    case ErrorKind::kQuantizationOverflow:
      return absl::StatusCode::kOutOfRange;
    case ErrorKind::kDivergence:
      return absl::StatusCode::kInternal;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInfeasibleParameters: return "InfeasibleParameters";
    case ErrorKind::kGuardViolation: return "GuardViolation";
    case ErrorKind::kClusterTooSmall: return "ClusterTooSmall";
    case ErrorKind::kInvalidDegree: return "InvalidDegree";
    case ErrorKind::kInvalidThreshold: return "InvalidThreshold";
    case ErrorKind::kInsufficientShares: return "InsufficientShares";
    case ErrorKind::kMalformedShares: return "MalformedShares";
    case ErrorKind::kSelfPairing: return "SelfPairing";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kQuantizationOverflow: return "QuantizationOverflow";
    case ErrorKind::kReconstructionFailure: return "ReconstructionFailure";
    case ErrorKind::kCapacityExhausted: return "CapacityExhausted";
    case ErrorKind::kUnknownUser: return "UnknownUser";
    case ErrorKind::kAlreadyUnlearned: return "AlreadyUnlearned";
    case ErrorKind::kPerClusterBudgetExceeded:
      return "PerClusterBudgetExceeded";
    case ErrorKind::kDuplicateTarget: return "DuplicateTarget";
    case ErrorKind::kDegenerateCluster: return "DegenerateCluster";
    case ErrorKind::kDegenerateCardinality: return "DegenerateCardinality";
    case ErrorKind::kDivergence: return "DivergenceError";
    case ErrorKind::kMissingKey: return "MissingKey";
    case ErrorKind::kUnknownKey: return "UnknownKey";
    case ErrorKind::kDuplicateKey: return "DuplicateKey";
    case ErrorKind::kRangeError: return "RangeError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  absl::Status status(CodeFor(kind),
                      std::string(ErrorKindName(kind)) + ": " +
                          std::string(message));
  status.SetPayload(kKindPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> KindOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(kKindPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  for (ErrorKind kind : kAllKinds) {
    if (*payload == ErrorKindName(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace cfu
