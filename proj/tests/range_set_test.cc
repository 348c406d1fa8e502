// Copyright 2026 The objfs Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "objfs/range_set.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace objfs {
namespace {

TEST(RangeSet, MergesOverlappingAndAdjacent) {
  RangeSet r;
  r.Insert(10, 5);
  r.Insert(20, 5);
  EXPECT_EQ(r.size(), 2u);
  r.Insert(15, 5);  // touches both
  EXPECT_EQ(r.ranges(), (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{10, 25}}));
  r.Insert(0, 0);
  EXPECT_EQ(r.size(), 1u);
  r.Clip(12);
  EXPECT_EQ(r.ranges(), (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{10, 12}}));
  EXPECT_EQ(r.covered_bytes(), 2u);
}

// Brute-force oracle: a bitmap.
TEST(RangeSet, MatchesBitmapOracle) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 300; ++round) {
    RangeSet r;
    std::vector<bool> bits(400, false);
    for (int op = 0; op < 40; ++op) {
      if (rng() % 8 == 0) {
        const std::uint64_t limit = rng() % 400;
        r.Clip(limit);
        for (std::uint64_t i = limit; i < bits.size(); ++i) bits[i] = false;
      } else {
        const std::uint64_t off = rng() % 350, len = rng() % 50;
        r.Insert(off, len);
        for (std::uint64_t i = off; i < off + len; ++i) bits[i] = true;
      }
      std::vector<std::pair<std::uint64_t, std::uint64_t>> want;
      std::uint64_t covered = 0;
      for (std::uint64_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) continue;
        ++covered;
        if (!want.empty() && want.back().second == i) {
          want.back().second = i + 1;
        } else {
          want.push_back({i, i + 1});
        }
      }
      ASSERT_EQ(r.ranges(), want);
      ASSERT_EQ(r.covered_bytes(), covered);
      for (int probe = 0; probe < 10; ++probe) {
        const std::uint64_t p = rng() % 400;
        ASSERT_EQ(r.Contains(p), bits[p]);
      }
    }
  }
}

}  // namespace
}  // namespace objfs
