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

#include "cfu/config.h"

#include <map>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "cfu/status.h"

namespace cfu {
namespace {

constexpr absl::string_view kSystemKeys[] = {
    "n_users", "gamma", "delta", "zeta", "xi", "sigma", "eta"};

const std::map<absl::string_view, RunMode>& ModesByName() {
  static const auto* modes = new std::map<absl::string_view, RunMode>{
      {"pargen", RunMode::kPargen},
      {"simulate-seq", RunMode::kSimulateSeq},
      {"simulate-bat", RunMode::kSimulateBat},
      {"montecarlo", RunMode::kMontecarlo},
      {"sweep", RunMode::kSweep},
      {"train", RunMode::kTrain},
  };
  return *modes;
}

absl::Status RangeError(int line, absl::string_view key,
                        absl::string_view value, absl::string_view want) {
  return MakeError(ErrorKind::kRangeError,
                   absl::StrFormat("line %d: %s = '%s' must be %s", line, key,
                                   value, want));
}

absl::Status ParseFraction(int line, absl::string_view key,
                           absl::string_view value, bool open_at_zero,
                           double* out) {
  double v;
  const bool in_range = absl::SimpleAtod(value, &v) &&
                        (open_at_zero ? v > 0 : v >= 0) && v < 1;
  if (!in_range) {
    return RangeError(line, key, value,
                      open_at_zero ? "in (0, 1)" : "in [0, 1)");
  }
  *out = v;
  return absl::OkStatus();
}

template <typename Int>
absl::Status ParseInt(int line, absl::string_view key, absl::string_view value,
                      Int min, Int* out) {
  Int v;
  if (!absl::SimpleAtoi(value, &v) || v < min) {
    return RangeError(line, key, value,
                      absl::StrFormat("an integer >= %d", min));
  }
  *out = v;
  return absl::OkStatus();
}

}  // namespace

absl::string_view RunModeName(RunMode mode) {
  for (const auto& [name, m] : ModesByName()) {
    if (m == mode) return name;
  }
  return "unknown";
}

absl::StatusOr<RunConfig> ParseConfig(absl::string_view text) {
  RunConfig config;
  std::map<std::string, int> seen;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrFormat("line %d: expected key = value",
                                       line_no));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      return MakeError(ErrorKind::kDuplicateKey,
                       absl::StrFormat("line %d: '%s' already set on line %d",
                                       line_no, key, it->second));
    }

    absl::Status s;
    SystemParams& p = config.params;
    if (key == "n_users") {
      s = ParseInt<int64_t>(line_no, key, value, 1, &p.n_users);
    } else if (key == "gamma") {
      s = ParseFraction(line_no, key, value, false, &p.frac_adversarial);
    } else if (key == "delta") {
      s = ParseFraction(line_no, key, value, false, &p.frac_dropout);
    } else if (key == "zeta") {
      s = ParseFraction(line_no, key, value, false,
                        &p.frac_unlearn_per_cluster);
    } else if (key == "xi") {
      s = ParseFraction(line_no, key, value, true, &p.shamir_rate);
    } else if (key == "sigma") {
      s = ParseInt<int>(line_no, key, value, 1, &p.security_bits);
    } else if (key == "eta") {
      s = ParseInt<int>(line_no, key, value, 1, &p.correctness_bits);
    } else if (key == "mode") {
      auto it = ModesByName().find(value);
      if (it == ModesByName().end()) {
        std::vector<absl::string_view> names;
        for (const auto& [name, m] : ModesByName()) names.push_back(name);
        s = RangeError(line_no, key, value,
                       absl::StrCat("one of ", absl::StrJoin(names, ", ")));
      } else {
        config.mode = it->second;
      }
    } else if (key == "trials") {
      s = ParseInt<int64_t>(line_no, key, value, 1, &config.trials);
      config.has_trials = true;
    } else if (key == "rounds") {
      s = ParseInt<int>(line_no, key, value, 1, &config.rounds);
      config.has_rounds = true;
    } else if (key == "requests") {
      s = ParseInt<int64_t>(line_no, key, value, 0, &config.requests);
      config.has_requests = true;
    } else if (key == "seed") {
      s = ParseInt<uint64_t>(line_no, key, value, 0, &config.seed);
    } else if (key == "out") {
      if (value.empty()) {
        s = RangeError(line_no, key, value, "a nonempty path");
      } else {
        config.out = std::string(value);
      }
    } else {
      s = MakeError(ErrorKind::kUnknownKey,
                    absl::StrFormat("line %d: unknown key '%s'", line_no,
                                    key));
    }
    if (!s.ok()) return s;
  }

  std::vector<std::string> missing;
  for (absl::string_view key : {"mode", "seed"}) {
    if (!seen.contains(std::string(key))) missing.emplace_back(key);
  }
  for (absl::string_view key : kSystemKeys) {
    if (!seen.contains(std::string(key))) missing.emplace_back(key);
  }
  if (!missing.empty()) {
    return MakeError(ErrorKind::kMissingKey, absl::StrJoin(missing, ", "));
  }
  return config;
}

absl::Status CheckRequiredKeys(const RunConfig& config) {
  std::vector<absl::string_view> missing;
  switch (config.mode) {
    case RunMode::kSimulateSeq:
    case RunMode::kSimulateBat:
      if (!config.has_requests) missing.push_back("requests");
      break;
    case RunMode::kMontecarlo:
      if (!config.has_trials) missing.push_back("trials");
      break;
    case RunMode::kTrain:
      if (!config.has_rounds) missing.push_back("rounds");
      break;
    case RunMode::kPargen:
    case RunMode::kSweep:
      break;
  }
  if (!missing.empty()) {
    return MakeError(ErrorKind::kMissingKey,
                     absl::StrCat("mode ", RunModeName(config.mode),
                                  " needs ", absl::StrJoin(missing, ", ")));
  }
  return absl::OkStatus();
}

}  // namespace cfu
