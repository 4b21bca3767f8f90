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

#ifndef CFU_CLI_H_
#define CFU_CLI_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "cfu/config.h"

namespace cfu {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitGuard = 3;

// 2 for infeasible parameters, 3 for guard and capacity violations, 1 for
// anything else that is not OK.
int ExitCodeFor(const absl::Status& status);

struct RunOptions {
  int threads = 1;
};

struct RunOutcome {
  int exit_code = kExitOk;
  // Single `summary ...` line, without trailing newline.
  std::string summary;
  // Files written, relative to config.out.
  std::vector<std::string> artifacts;
};

// Executes `config.mode` end to end and writes its reports under
// `config.out`. Never throws; failures are folded into the outcome.
RunOutcome Run(const RunConfig& config, const RunOptions& options = {});

// Maps a command name plus an optional seq|bat selector onto a mode.
// `config_mode` supplies the selector for `simulate` when none is given.
absl::StatusOr<RunMode> ModeForCommand(absl::string_view command,
                                       absl::string_view selector,
                                       RunMode config_mode);

}  // namespace cfu

#endif  // CFU_CLI_H_
