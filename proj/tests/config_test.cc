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

#include <string>

#include "absl/strings/str_cat.h"
#include "cfu/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cfu {
namespace {

using ::testing::HasSubstr;

constexpr char kSystem[] =
    "n_users = 200\ngamma = 0.1\ndelta = 0.1\nzeta = 0.1\nxi = 0.7\n"
    "sigma = 40\neta = 40\n";

TEST(ConfigTest, ParsesEveryKey) {
  const std::string text = std::string(kSystem) +
                           "# comment line\n"
                           "mode = montecarlo   # trailing comment\n"
                           "seed = 7\ntrials = 100\nrounds = 3\n"
                           "requests = 0\nout = /tmp/x\n";
  RunConfig c = *ParseConfig(text);
  EXPECT_EQ(c.params.n_users, 200);
  EXPECT_EQ(c.params.shamir_rate, 0.7);
  EXPECT_EQ(c.params.security_bits, 40);
  EXPECT_EQ(c.mode, RunMode::kMontecarlo);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.trials, 100);
  EXPECT_EQ(c.rounds, 3);
  EXPECT_TRUE(c.has_requests);
  EXPECT_EQ(c.requests, 0);
  EXPECT_EQ(c.out, "/tmp/x");
  EXPECT_TRUE(CheckRequiredKeys(c).ok());
}

TEST(ConfigTest, ModeNames) {
  for (RunMode m : {RunMode::kPargen, RunMode::kSimulateSeq,
                    RunMode::kSimulateBat, RunMode::kMontecarlo,
                    RunMode::kSweep, RunMode::kTrain}) {
    const std::string text = absl::StrCat(kSystem, "seed = 1\nmode = ",
                                          RunModeName(m), "\n");
    EXPECT_EQ(ParseConfig(text)->mode, m) << RunModeName(m);
  }
}

TEST(ConfigTest, UnknownKey) {
  absl::Status s =
      ParseConfig(std::string(kSystem) + "seed = 1\nmode = sweep\nfoo = 1\n")
          .status();
  EXPECT_TRUE(IsKind(s, ErrorKind::kUnknownKey));
  EXPECT_THAT(s.message(), HasSubstr("line 10"));
}

TEST(ConfigTest, DuplicateKeyNamesBothLines) {
  absl::Status s =
      ParseConfig(std::string(kSystem) + "seed = 1\nmode = sweep\nxi = 0.8\n")
          .status();
  EXPECT_TRUE(IsKind(s, ErrorKind::kDuplicateKey));
  EXPECT_THAT(s.message(), HasSubstr("line 10"));
  EXPECT_THAT(s.message(), HasSubstr("line 5"));
}

TEST(ConfigTest, RangeErrors) {
  for (const char* bad : {"gamma = 1", "gamma = -0.1", "xi = 0", "xi = 1",
                          "n_users = 0", "sigma = 0", "trials = 0",
                          "rounds = 0", "requests = -1", "seed = x",
                          "mode = fast", "delta = abc"}) {
    std::string text = absl::StrCat("# one\n# two\n", bad, "\n");
    absl::Status s = ParseConfig(text).status();
    EXPECT_TRUE(IsKind(s, ErrorKind::kRangeError)) << bad << ": " << s;
    EXPECT_THAT(s.message(), HasSubstr("line 3")) << bad;
  }
}

TEST(ConfigTest, MissingKeys) {
  absl::Status s = ParseConfig("mode = sweep\nxi = 0.7\n").status();
  EXPECT_TRUE(IsKind(s, ErrorKind::kMissingKey));
  EXPECT_THAT(s.message(), HasSubstr("seed"));
  EXPECT_THAT(s.message(), HasSubstr("n_users"));
  EXPECT_THAT(s.message(), testing::Not(HasSubstr("xi")));
}

TEST(ConfigTest, MissingEquals) {
  EXPECT_TRUE(IsKind(ParseConfig("seed 1\n").status(),
                     ErrorKind::kInvalidArgument));
}

TEST(ConfigTest, ModeRequirements) {
  const std::string base = std::string(kSystem) + "seed = 1\n";
  EXPECT_TRUE(IsKind(
      CheckRequiredKeys(*ParseConfig(base + "mode = simulate-seq\n")),
      ErrorKind::kMissingKey));
  EXPECT_TRUE(IsKind(CheckRequiredKeys(*ParseConfig(base + "mode = train\n")),
                     ErrorKind::kMissingKey));
  EXPECT_TRUE(IsKind(
      CheckRequiredKeys(*ParseConfig(base + "mode = montecarlo\n")),
      ErrorKind::kMissingKey));
  EXPECT_TRUE(CheckRequiredKeys(*ParseConfig(base + "mode = pargen\n")).ok());
}

}  // namespace
}  // namespace cfu
