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

#ifndef CFU_CONFIG_H_
#define CFU_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "cfu/bounds.h"

namespace cfu {

enum class RunMode {
  kPargen,
  kSimulateSeq,
  kSimulateBat,
  kMontecarlo,
  kSweep,
  kTrain,
};

absl::string_view RunModeName(RunMode mode);

struct RunConfig {
  SystemParams params;
  RunMode mode = RunMode::kPargen;
  int64_t trials = 0;
  int rounds = 0;
  int64_t requests = 0;
  uint64_t seed = 0;
  std::string out = ".";
  // Which of the optional keys were present.
  bool has_trials = false;
  bool has_rounds = false;
  bool has_requests = false;
};

// Parses `key = value` lines; `#` starts a comment. Keys: n_users, gamma,
// delta, zeta, xi, sigma, eta, mode, trials, rounds, requests, seed, out.
// Errors carry the offending line number: UnknownKey, DuplicateKey,
// RangeError (bad or out-of-range value), InvalidArgument (no `=`), and
// MissingKey for keys the mode requires.
absl::StatusOr<RunConfig> ParseConfig(absl::string_view text);

// MissingKey unless every key needed by `config.mode` is present.
absl::Status CheckRequiredKeys(const RunConfig& config);

}  // namespace cfu

#endif  // CFU_CONFIG_H_
