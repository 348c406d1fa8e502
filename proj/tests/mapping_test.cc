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

#include "objfs/mapping.h"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "objfs/error.h"

namespace objfs {
namespace {

constexpr std::uint64_t M = kMiB;

TEST(Locate, ExampleSpansTwoChunks) {
  const auto spans = Locate(MappingDescriptor::OneToN(4 * M), 5 * M, 4 * M, 64 * M);
  EXPECT_EQ(spans, (std::vector<ChunkSpan>{{1, 1 * M, 3 * M}, {2, 0, 1 * M}}));
}

TEST(Locate, OneToOneIsSingleSpan) {
  const auto spans = Locate(MappingDescriptor::OneToOne(), 12345, 999, 10);
  EXPECT_EQ(spans, (std::vector<ChunkSpan>{{0, 12345, 999}}));
  EXPECT_TRUE(Locate(MappingDescriptor::OneToOne(), 5, 0, 10).empty());
}

// Marks every byte of the range through the spans and checks coverage.
TEST(Locate, ByteMarkingOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t chunk = 1 + rng() % 64;
    const MappingDescriptor d = MappingDescriptor::OneToN(chunk);
    const std::uint64_t off = rng() % 512, len = rng() % 300;
    std::vector<int> marks(off + len + 1, 0);
    std::uint64_t expect_next = off;
    for (const ChunkSpan& s : Locate(d, off, len, 0)) {
      ASSERT_GT(s.span_len, 0u);
      ASSERT_LE(s.intra_offset + s.span_len, chunk);
      const std::uint64_t start = s.chunk_idx * chunk + s.intra_offset;
      ASSERT_EQ(start, expect_next);  // ordered, no gaps
      for (std::uint64_t b = start; b < start + s.span_len; ++b) ++marks[b];
      expect_next = start + s.span_len;
    }
    for (std::uint64_t b = 0; b < marks.size(); ++b) {
      ASSERT_EQ(marks[b], (b >= off && b < off + len) ? 1 : 0);
    }
  }
}

TEST(Layout, Examples) {
  const MappingDescriptor d = MappingDescriptor::OneToN(4 * M);
  EXPECT_EQ(Layout(d, 10 * M), (std::vector<ChunkExtent>{{0, 4 * M}, {1, 4 * M}, {2, 2 * M}}));
  EXPECT_TRUE(Layout(d, 0).empty());
  EXPECT_EQ(Layout(MappingDescriptor::OneToOne(), 77), (std::vector<ChunkExtent>{{0, 77}}));
  EXPECT_EQ(Layout(MappingDescriptor::OneToOne(), 0), (std::vector<ChunkExtent>{{0, 0}}));
}

TEST(Layout, SumsToFileSize) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t chunk = 1 + rng() % 1000, size = rng() % 100000;
    std::uint64_t sum = 0, idx = 0;
    const auto layout = Layout(MappingDescriptor::OneToN(chunk), size);
    EXPECT_EQ(layout.size(), (size + chunk - 1) / chunk);
    for (const ChunkExtent& e : layout) {
      EXPECT_EQ(e.chunk_idx, idx++);
      EXPECT_LE(e.object_size, chunk);
      EXPECT_GT(e.object_size, 0u);
      sum += e.object_size;
    }
    EXPECT_EQ(sum, size);
  }
}

TEST(WritePlan, AlignedChunkWriteIsFullOverwrite) {
  const auto plan = WritePlan(MappingDescriptor::OneToN(4 * M), 8 * M, 4 * M, 64 * M);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].chunk_idx, 2u);
  EXPECT_EQ(plan[0].kind, ChunkWrite::kFullOverwrite);
}

TEST(WritePlan, OneToOnePartialWriteIsReadModifyWrite) {
  const auto plan = WritePlan(MappingDescriptor::OneToOne(), 8 * M, 4 * M, 64 * M);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].kind, ChunkWrite::kReadModifyWrite);
  EXPECT_EQ(plan[0].old_object_size, 64 * M);
  EXPECT_EQ(plan[0].new_object_size, 64 * M);
}

TEST(WritePlan, WritePastEofZeroFillsGap) {
  // File of 1 MiB, write lands in chunk 3: chunk 0 is zero-extended, chunks
  // 1 and 2 appear as zero-filled objects, chunk 3 is written fresh.
  const auto plan = WritePlan(MappingDescriptor::OneToN(4 * M), 13 * M, M, M);
  ASSERT_EQ(plan.size(), 4u);
  EXPECT_EQ(plan[0].kind, ChunkWrite::kReadModifyWrite);
  EXPECT_EQ(plan[0].new_object_size, 4 * M);
  EXPECT_EQ(plan[1].kind, ChunkWrite::kFullOverwrite);
  EXPECT_EQ(plan[1].span_len, 0u);
  EXPECT_EQ(plan[3].kind, ChunkWrite::kFullOverwrite);
  EXPECT_EQ(plan[3].intra_offset, M);
  EXPECT_EQ(plan[3].new_object_size, 2 * M);
}

// Applies plans to a simulated object map and compares with a flat byte
// array that received the same writes.
TEST(WritePlan, MatchesByteArrayOracle) {
  std::mt19937_64 rng(3);
  int cases = 0;
  for (int file = 0; file < 400; ++file) {
    const bool chunked = rng() % 4 != 0;
    const std::uint64_t chunk = 1 + rng() % 48;
    const MappingDescriptor d =
        chunked ? MappingDescriptor::OneToN(chunk) : MappingDescriptor::OneToOne();
    std::map<std::uint64_t, Bytes> objects;
    Bytes oracle;
    for (int w = 0; w < 30; ++w, ++cases) {
      const std::uint64_t off = rng() % 200, len = rng() % 80;
      Bytes data(len);
      for (auto& b : data) b = static_cast<std::uint8_t>(1 + rng() % 255);
      for (const ChunkAction& a : WritePlan(d, off, len, oracle.size())) {
        Bytes obj;
        auto it = objects.find(a.chunk_idx);
        const std::uint64_t have = it == objects.end() ? 0 : it->second.size();
        ASSERT_EQ(a.old_object_size, have);
        // Full overwrites must not depend on prior contents.
        if (a.kind == ChunkWrite::kReadModifyWrite) obj = it->second;
        // The chunk's live extent is entirely covered iff full overwrite.
        const bool covers = a.intra_offset == 0 && a.span_len >= have;
        ASSERT_EQ(a.kind == ChunkWrite::kFullOverwrite, have == 0 || covers);
        obj.resize(a.new_object_size, 0);
        std::copy(data.begin() + a.src_offset, data.begin() + a.src_offset + a.span_len,
                  obj.begin() + a.intra_offset);
        objects[a.chunk_idx] = std::move(obj);
      }
      if (len > 0) {
        if (oracle.size() < off + len) oracle.resize(off + len, 0);
        std::copy(data.begin(), data.end(), oracle.begin() + off);
      }
      // Object layout must match Layout(), then reading back must match.
      const auto layout = Layout(d, oracle.size());
      if (!chunked && oracle.empty()) continue;
      ASSERT_EQ(objects.size(), layout.size());
      for (const ChunkExtent& e : layout) ASSERT_EQ(objects.at(e.chunk_idx).size(), e.object_size);
      Bytes back;
      for (const ChunkSpan& s : Locate(d, 0, oracle.size(), oracle.size())) {
        const Bytes& obj = objects.at(s.chunk_idx);
        back.insert(back.end(), obj.begin() + s.intra_offset,
                    obj.begin() + s.intra_offset + s.span_len);
      }
      ASSERT_EQ(back, oracle) << "file " << file << " write " << w;
    }
  }
  EXPECT_GE(cases, 10000);
}

TEST(Mapping, LargeChunkReadsLikeOneToOne) {
  const std::uint64_t size = 1000;
  const auto a = Locate(MappingDescriptor::OneToN(4 * M), 10, 500, size);
  const auto b = Locate(MappingDescriptor::OneToOne(), 10, 500, size);
  EXPECT_EQ(a, b);
  EXPECT_EQ(Layout(MappingDescriptor::OneToN(4 * M), size),
            Layout(MappingDescriptor::OneToOne(), size));
}

TEST(Mapping, ZeroChunkIsInvalid) {
  EXPECT_THROW(MappingDescriptor::OneToN(0).Validate(), Error);
  EXPECT_EQ(ChunkStart(MappingDescriptor::OneToN(10), 3), 30u);
}

}  // namespace
}  // namespace objfs
