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

#include "cfu/topology.h"

#include <vector>

#include "cfu/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cfu {
namespace {

using ::testing::ElementsAre;

HararyGraph Make(int k, int m) {
  absl::StatusOr<HararyGraph> g = BuildHarary(k, m);
  EXPECT_TRUE(g.ok()) << g.status();
  return *std::move(g);
}

TEST(TopologyTest, ChooseDegree) {
  EXPECT_EQ(*ChooseDegree(3), 2);
  EXPECT_EQ(*ChooseDegree(50), 4);
  EXPECT_EQ(*ChooseDegree(60), 6);
  EXPECT_EQ(*ChooseDegree(13), 4);
  EXPECT_TRUE(IsKind(ChooseDegree(2).status(), ErrorKind::kClusterTooSmall));
}

TEST(TopologyTest, RingAndOffsets) {
  const HararyGraph ring = Make(4, 2);
  EXPECT_THAT(ring.neighbors(0), ElementsAre(1, 3));
  EXPECT_THAT(ring.neighbors(2), ElementsAre(1, 3));
  const HararyGraph g = Make(8, 4);
  for (int v = 0; v < 8; ++v) {
    EXPECT_EQ(g.neighbors(v).size(), 4u);
    for (int d : {1, 2, 6, 7}) EXPECT_TRUE(g.adjacent(v, (v + d) % 8));
    EXPECT_FALSE(g.adjacent(v, v));
    EXPECT_FALSE(g.adjacent(v, (v + 4) % 8));
  }
}

TEST(TopologyTest, InvalidDegrees) {
  EXPECT_TRUE(IsKind(BuildHarary(5, 5).status(), ErrorKind::kInvalidDegree));
  EXPECT_TRUE(IsKind(BuildHarary(8, 3).status(), ErrorKind::kInvalidDegree));
  EXPECT_TRUE(IsKind(BuildHarary(4, 4).status(), ErrorKind::kInvalidDegree));
  EXPECT_TRUE(IsKind(BuildHarary(4, 0).status(), ErrorKind::kInvalidDegree));
}

TEST(TopologyTest, CompleteGraph) {
  const HararyGraph g = HararyGraph::Complete(4);
  EXPECT_EQ(g.degree(), 3);
  EXPECT_THAT(g.neighbors(2), ElementsAre(0, 1, 3));
}

TEST(TopologyTest, ConnectedAfterRemoval) {
  const HararyGraph ring = Make(8, 2);
  EXPECT_TRUE(ConnectedAfterRemoval(ring, {}));
  EXPECT_FALSE(ConnectedAfterRemoval(ring, {1, 7}));
  const HararyGraph g = Make(10, 4);
  for (int a = 0; a < 10; ++a) {
    for (int b = a; b < 10; ++b) {
      for (int c = b; c < 10; ++c) {
        EXPECT_TRUE(ConnectedAfterRemoval(g, {a, b, c}));
      }
    }
  }
}

TEST(TopologyTest, HonestAlivePartition) {
  const HararyGraph ring = Make(8, 2);
  const std::vector<std::vector<int>> all =
      HonestAlivePartition(ring, {}, {}, {});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].size(), 8u);
  const std::vector<std::vector<int>> singles{{0}, {2}, {4}, {6}};
  EXPECT_EQ(HonestAlivePartition(ring, {}, {1, 3, 5}, {7}), singles);
  EXPECT_EQ(HonestAlivePartition(ring, {1}, {3, 5}, {7}), singles);
}

TEST(TopologyTest, PartitionInvariantUnderRotation) {
  const HararyGraph g = Make(12, 4);
  const VertexSet adversarial = {2, 3};
  const VertexSet dropped = {8};
  const VertexSet unlearned = {9};
  const size_t blocks =
      HonestAlivePartition(g, adversarial, dropped, unlearned).size();
  for (int shift = 1; shift < 12; ++shift) {
    auto rot = [&](const VertexSet& s) {
      VertexSet out;
      for (int v : s) out.insert((v + shift) % 12);
      return out;
    };
    EXPECT_EQ(HonestAlivePartition(g, rot(adversarial), rot(dropped),
                                   rot(unlearned))
                  .size(),
              blocks);
  }
}

}  // namespace
}  // namespace cfu
