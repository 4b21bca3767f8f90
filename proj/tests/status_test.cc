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

#include <set>
#include <string>

#include "gtest/gtest.h"

namespace cfu {
namespace {

TEST(StatusTest, MakeErrorCarriesKindAndPrefix) {
  absl::Status s = MakeError(ErrorKind::kGuardViolation, "tau too large");
  EXPECT_FALSE(s.ok());
  EXPECT_EQ(s.message(), "GuardViolation: tau too large");
  EXPECT_EQ(KindOf(s), ErrorKind::kGuardViolation);
  EXPECT_TRUE(IsKind(s, ErrorKind::kGuardViolation));
  EXPECT_FALSE(IsKind(s, ErrorKind::kRangeError));
}

TEST(StatusTest, PlainStatusesHaveNoKind) {
  EXPECT_EQ(KindOf(absl::OkStatus()), std::nullopt);
  EXPECT_EQ(KindOf(absl::InternalError("x")), std::nullopt);
}

TEST(StatusTest, KindNamesAreDistinct) {
  std::set<std::string> names;
  for (int k = 0; k <= static_cast<int>(ErrorKind::kInvalidArgument); ++k) {
    const auto kind = static_cast<ErrorKind>(k);
    names.insert(std::string(ErrorKindName(kind)));
    EXPECT_EQ(KindOf(MakeError(kind, "m")), kind);
  }
  EXPECT_EQ(names.size(),
            static_cast<size_t>(ErrorKind::kInvalidArgument) + 1);
}

}  // namespace
}  // namespace cfu
