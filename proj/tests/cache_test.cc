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

#include "objfs/cache.h"

#include <gtest/gtest.h>

#include <random>

#include "flaky_store.h"
#include "objfs/error.h"

namespace objfs {
namespace {

constexpr std::uint64_t M = kMiB;

Bytes Random(std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store = std::make_shared<MemoryObjectStore>();
    store->CreateBucket("b");
  }
  std::unique_ptr<Cache> Make(CacheKind kind, std::uint64_t capacity = 8192 * M) {
    CachePolicy p;
    p.kind = kind;
    p.capacity_bytes = capacity;
    return std::make_unique<Cache>(store, p);
  }
  FileLayout L(MappingDescriptor m, std::string base = "f") { return {"b", std::move(base), m}; }
  void Seed(const FileLayout& l, const Bytes& data) {
    ChunkIo io(store.get(), TransferOptions{});
    io.StoreChunks(l, data, [&] {
      std::set<std::uint64_t> all;
      for (const ChunkExtent& e : Layout(l.mapping, data.size())) all.insert(e.chunk_idx);
      return all;
    }());
    store->reset_counters();
  }

  std::shared_ptr<MemoryObjectStore> store;
  InodeNumber ino{42};
};

TEST_F(CacheTest, OpenFetchesOnceAndReadsFromBuffer) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  const Bytes data = Random(64 * M, 1);
  store->Put({"b", "f"}, data);
  store->reset_counters();
  auto c = Make(CacheKind::kWriteBack);
  c->OpenFetch(ino, l, data.size());
  EXPECT_EQ(store->counters().gets, 16u);  // multipart at 4 MiB parts
  c->OpenFetch(ino, l, data.size());
  EXPECT_EQ(store->counters().gets, 16u);
  const Bytes got = c->Read(ino, l, 5 * M, 3 * M, data.size());
  EXPECT_EQ(got, Bytes(data.begin() + 5 * M, data.begin() + 8 * M));
  EXPECT_EQ(store->counters().gets, 16u);
  EXPECT_EQ(c->Read(ino, l, 63 * M, 4 * M, data.size()).size(), M);
  EXPECT_FALSE(c->FlushClose(ino, l));
  EXPECT_TRUE(c->FlushClose(ino, l));
  EXPECT_EQ(store->counters().puts, 0u);
  EXPECT_FALSE(c->IsCached(ino));
}

TEST_F(CacheTest, EmptyFileFetchesNothing) {
  auto c = Make(CacheKind::kWriteBack);
  const FileLayout l = L(MappingDescriptor::OneToN(4 * M));
  c->OpenFetch(ino, l, 0);
  EXPECT_EQ(store->counters().total_ops(), 0u);
}

TEST_F(CacheTest, WriteBackDefersPutsUntilLastClose) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  auto c = Make(CacheKind::kWriteBack);
  c->OpenFetch(ino, l, 0, /*fresh=*/true);
  std::uint64_t size = 0;
  Bytes want;
  for (int i = 0; i < 16; ++i) {
    const Bytes rec = Random(4 * M, 100 + i);
    size = c->Write(ino, l, i * 4 * M, rec, size);
    want.insert(want.end(), rec.begin(), rec.end());
  }
  EXPECT_EQ(size, 64 * M);
  EXPECT_EQ(store->counters().puts, 0u);
  EXPECT_TRUE(c->IsDirty(ino));
  EXPECT_TRUE(c->FlushClose(ino, l));
  EXPECT_EQ(store->counters().puts, 16u);
  EXPECT_EQ(store->counters().gets, 0u);
  EXPECT_EQ(*store->Get({"b", "f"}).data, want);
}

TEST_F(CacheTest, OneToNFlushesDirtyChunksOnly) {
  const FileLayout l = L(MappingDescriptor::OneToN(4 * M));
  const Bytes data = Random(64 * M, 2);
  Seed(l, data);
  auto c = Make(CacheKind::kWriteBack);
  c->OpenFetch(ino, l, data.size());
  store->reset_counters();
  c->Write(ino, l, 4 * M + 10, Bytes(100, 1), data.size());
  c->Write(ino, l, 40 * M, Bytes(10, 2), data.size());
  c->FlushClose(ino, l);
  EXPECT_EQ(store->counters().puts, 2u);
  EXPECT_EQ(store->counters().gets, 0u);
}

TEST_F(CacheTest, StalenessWindowUnderWriteBack) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  store->Put({"b", "f"}, ToBytes("old!"));
  auto c = Make(CacheKind::kWriteBack);
  c->OpenFetch(ino, l, 4);
  c->Write(ino, l, 0, ToBytes("new!"), 4);
  EXPECT_EQ(ToString(c->Read(ino, l, 0, 4, 4)), "new!");     // read-your-writes
  EXPECT_EQ(ToString(*store->Get({"b", "f"}).data), "old!");  // documented staleness
  c->FlushClose(ino, l);
  EXPECT_EQ(ToString(*store->Get({"b", "f"}).data), "new!");
}

TEST_F(CacheTest, NonePolicyFollowsWritePlan) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  const Bytes data = Random(64 * M, 3);
  store->Put({"b", "f"}, data);
  store->reset_counters();
  auto c = Make(CacheKind::kNone);
  c->OpenFetch(ino, l, data.size());
  c->Write(ino, l, 8 * M, Bytes(4 * M, 9), data.size());
  EXPECT_EQ(store->counters().gets, 1u);
  EXPECT_EQ(store->counters().puts, 1u);
  EXPECT_EQ(store->counters().bytes_downloaded, 64 * M);
  EXPECT_EQ(store->counters().bytes_uploaded, 64 * M);
  c->FlushClose(ino, l);
  EXPECT_EQ(store->counters().puts, 1u);
}

TEST_F(CacheTest, NonePolicyOpCountsMatchPlanOverRandomWrites) {
  std::mt19937_64 rng(4);
  const FileLayout l = L(MappingDescriptor::OneToN(1000));
  auto c = Make(CacheKind::kNone);
  std::uint64_t size = 0;
  Bytes oracle;
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t off = rng() % 6000, len = 1 + rng() % 2500;
    const Bytes d = Random(len, i);
    std::uint64_t gets = 0, puts = 0;
    for (const ChunkAction& a : WritePlan(l.mapping, off, len, size)) {
      ++puts;
      if (a.kind == ChunkWrite::kReadModifyWrite) ++gets;
    }
    const OpCounters before = store->counters();
    size = c->Write(ino, l, off, d, size);
    const OpCounters delta = store->counters() - before;
    ASSERT_EQ(delta.gets, gets);
    ASSERT_EQ(delta.puts, puts);
    if (oracle.size() < off + len) oracle.resize(off + len, 0);
    std::copy(d.begin(), d.end(), oracle.begin() + off);
    ASSERT_EQ(c->Read(ino, l, 0, size, size), oracle);
  }
}

TEST_F(CacheTest, NoneChunkedReadIsOneGet) {
  const FileLayout l = L(MappingDescriptor::OneToN(4 * M));
  Seed(l, Random(16 * M, 5));
  auto c = Make(CacheKind::kNone);
  c->Read(ino, l, 4 * M, 4 * M, 16 * M);
  EXPECT_EQ(store->counters().gets, 1u);
}

TEST_F(CacheTest, ReadPastEofIsClamped) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  store->Put({"b", "f"}, ToBytes("abc"));
  for (CacheKind k : {CacheKind::kNone, CacheKind::kWriteBack}) {
    auto c = Make(k);
    c->OpenFetch(ino, l, 3);
    EXPECT_EQ(ToString(c->Read(ino, l, 1, 100, 3)), "bc");
    EXPECT_TRUE(c->Read(ino, l, 3, 10, 3).empty());
    c->FlushClose(ino, l);
  }
}

TEST_F(CacheTest, CapacityIsEnforced) {
  const FileLayout l = L(MappingDescriptor::OneToOne());
  store->Put({"b", "f"}, Bytes(2 * M));
  auto c = Make(CacheKind::kWriteBack, M);
  try {
    c->OpenFetch(ino, l, 2 * M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCacheExhausted);
  }
  EXPECT_FALSE(c->IsCached(ino));
  EXPECT_EQ(c->used_bytes(), 0u);
}

TEST_F(CacheTest, FailedFlushKeepsDirtyEntry) {
  auto flaky = std::make_shared<testing::FlakyStore>(store);
  CachePolicy p;
  Cache c(flaky, p);
  const FileLayout l = L(MappingDescriptor::OneToOne());
  c.OpenFetch(ino, l, 0, true);
  c.Write(ino, l, 0, ToBytes("data"), 0);
  flaky->FailAfter(0);
  EXPECT_THROW(c.FlushClose(ino, l), Error);
  EXPECT_TRUE(c.IsCached(ino));
  EXPECT_TRUE(c.IsDirty(ino));
  flaky->Heal();
  c.Flush(ino, l);
  EXPECT_FALSE(c.IsDirty(ino));
  EXPECT_EQ(ToString(*store->Get({"b", "f"}).data), "data");
}

TEST_F(CacheTest, TruncateShrinkDeletesTailChunks) {
  const FileLayout l = L(MappingDescriptor::OneToN(4 * M));
  const Bytes data = Random(10 * M, 6);
  Seed(l, data);
  auto c = Make(CacheKind::kNone);
  c->Truncate(ino, l, 5 * M, 10 * M);
  EXPECT_EQ(store->counters().dels, 1u);
  EXPECT_EQ(store->Head({"b", "f.c00000001"}).size, M);
  EXPECT_EQ(store->ListAll("b").size(), 2u);
}

}  // namespace
}  // namespace objfs
