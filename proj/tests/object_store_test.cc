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

#include "objfs/object_store.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <thread>

#include "objfs/error.h"

namespace objfs {
namespace {

constexpr double kBase = 0.02;
constexpr double kBw = 100.0 * kMiB;
constexpr double kCopyBw = 32.0 * kMiB;

StoreConfig Timed() {
  StoreConfig c;
  c.latency = LatencyModel{kBase, kBw, kCopyBw, 8};
  return c;
}

// Greedy list scheduling of transfers onto `streams` lanes, each transfer
// costing base + size / bandwidth. Written independently of the store.
double ScheduleOracle(const std::vector<std::uint64_t>& sizes, int streams) {
  std::priority_queue<double, std::vector<double>, std::greater<>> lanes;
  for (int i = 0; i < streams; ++i) lanes.push(0.0);
  double end = 0;
  for (std::uint64_t s : sizes) {
    double t = lanes.top();
    lanes.pop();
    t += kBase + static_cast<double>(s) / kBw;
    end = std::max(end, t);
    lanes.push(t);
  }
  return end;
}

Errc CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kIo;
}

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override { store.CreateBucket("b"); }
  ObjectKey K(std::string name) { return {"b", std::move(name)}; }
  MemoryObjectStore store;
};

TEST_F(StoreTest, EmptyObjectRoundTrip) {
  store.Put(K("x"), {});
  EXPECT_TRUE(store.Get(K("x")).data->empty());
}

TEST_F(StoreTest, OverwriteIsLastWriterWins) {
  store.Put(K("x"), ToBytes("one"));
  store.Put(K("x"), ToBytes("two"));
  EXPECT_EQ(ToString(*store.Get(K("x")).data), "two");
  EXPECT_EQ(store.counters().puts, 2u);
  EXPECT_EQ(store.counters().gets, 1u);
}

TEST_F(StoreTest, MissingKeyAndBucket) {
  EXPECT_EQ(CodeOf([&] { store.Get(K("nope")); }), Errc::kNoSuchKey);
  EXPECT_EQ(CodeOf([&] { store.Put({"zz", "x"}, {}); }), Errc::kUnknownBucket);
  EXPECT_EQ(CodeOf([&] { store.List("zz", "", std::nullopt); }), Errc::kUnknownBucket);
  EXPECT_EQ(CodeOf([&] { store.Del({"zz", "x"}); }), Errc::kUnknownBucket);
}

TEST_F(StoreTest, DeleteIsIdempotentAndLeavesSiblings) {
  store.Put(K("a"), ToBytes("1"));
  store.Put(K("ab"), ToBytes("2"));
  store.Del(K("a"));
  EXPECT_EQ(CodeOf([&] { store.Get(K("a")); }), Errc::kNoSuchKey);
  store.Del(K("a"));
  EXPECT_EQ(store.counters().dels, 2u);
  EXPECT_EQ(ToString(*store.Get(K("ab")).data), "2");
}

TEST_F(StoreTest, ListPrefixAndEmpty) {
  EXPECT_TRUE(store.ListAll("b").empty());
  for (const char* n : {"b", "ab", "a"}) store.Put(K(n), {});
  EXPECT_EQ(store.ListAll("b", "a"), (std::vector<std::string>{"a", "ab"}));
}

TEST_F(StoreTest, ListPaginatesAt1000) {
  std::set<std::string> want;
  for (int i = 0; i < 2500; ++i) {
    const std::string n = "k" + std::to_string(i);
    store.Put(K(n), {});
    want.insert(n);
  }
  std::vector<std::string> all;
  std::optional<std::string> token;
  int pages = 0;
  do {
    ListPage p = store.List("b", "", token);
    EXPECT_LE(p.names.size(), 1000u);
    EXPECT_TRUE(std::is_sorted(p.names.begin(), p.names.end()));
    all.insert(all.end(), p.names.begin(), p.names.end());
    token = p.next_token;
    ++pages;
  } while (token);
  EXPECT_EQ(pages, 3);
  EXPECT_EQ(all.size(), 2500u);
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()), want);
}

TEST_F(StoreTest, CopyCarriesBytesMetaAndEtag) {
  const std::string etag = store.Put(K("src"), ToBytes("payload"), {{"mode", "0644"}});
  EXPECT_EQ(store.Copy(K("src"), K("dst")), etag);
  const ObjectRecord r = store.Get(K("dst"));
  EXPECT_EQ(ToString(*r.data), "payload");
  EXPECT_EQ(r.etag, etag);
  EXPECT_EQ(r.user_meta.at("mode"), "0644");
  EXPECT_EQ(ToString(*store.Get(K("src")).data), "payload");
  const OpCounters c = store.counters();
  EXPECT_EQ(c.copies, 1u);
  EXPECT_EQ(c.bytes_uploaded, 7u);  // the original put only
}

TEST_F(StoreTest, CopyOfMissingLeavesDestinationAbsent) {
  EXPECT_EQ(CodeOf([&] { store.Copy(K("missing"), K("dst")); }), Errc::kNoSuchKey);
  EXPECT_EQ(CodeOf([&] { store.Head(K("dst")); }), Errc::kNoSuchKey);
}

TEST_F(StoreTest, EtagFollowsContent) {
  const std::string a = store.Put(K("x"), ToBytes("hello"));
  const std::string b = store.Put(K("y"), ToBytes("hello"));
  const std::string c = store.Put(K("x"), ToBytes("hellp"));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a, ComputeEtag(ToBytes("hello")));
}

TEST_F(StoreTest, UserMetaIsIndependentOfData) {
  store.Put(K("x"), ToBytes("data"));
  const OpCounters before = store.counters();
  store.SetUserMeta(K("x"), {{"mode", "0644"}, {"uid", "7"}});
  EXPECT_EQ(store.GetUserMeta(K("x")), (UserMeta{{"mode", "0644"}, {"uid", "7"}}));
  store.SetUserMeta(K("x"), {{"gid", "3"}});
  EXPECT_EQ(store.GetUserMeta(K("x")), (UserMeta{{"gid", "3"}}));
  const OpCounters d = store.counters() - before;
  EXPECT_EQ(d.bytes_uploaded, 0u);
  EXPECT_EQ(d.bytes_downloaded, 0u);
  EXPECT_EQ(ToString(*store.Get(K("x")).data), "data");
  EXPECT_EQ(CodeOf([&] { store.SetUserMeta(K("nope"), {}); }), Errc::kNoSuchKey);
}

TEST_F(StoreTest, CounterExamples) {
  EXPECT_EQ(store.counters(), OpCounters{});
  for (int i = 0; i < 3; ++i) store.Put(K("k" + std::to_string(i)), ToBytes("ab"));
  store.Get(K("k0"));
  store.Get(K("k1"));
  OpCounters c = store.counters();
  EXPECT_EQ(c.puts, 3u);
  EXPECT_EQ(c.gets, 2u);
  EXPECT_EQ(c.bytes_uploaded, 6u);
  EXPECT_EQ(c.bytes_downloaded, 4u);
  store.reset_counters();
  store.List("b", "", std::nullopt);
  OpCounters want;
  want.lists = 1;
  EXPECT_EQ(store.counters(), want);
}

TEST(StoreLimits, BucketCapAndCapacity) {
  StoreConfig c;
  c.max_buckets = 2;
  c.capacity_bytes = 10;
  MemoryObjectStore s(c);
  s.CreateBucket("a");
  s.CreateBucket("b");
  EXPECT_EQ(CodeOf([&] { s.CreateBucket("c"); }), Errc::kTooManyBuckets);
  s.Put({"a", "x"}, Bytes(8));
  EXPECT_EQ(CodeOf([&] { s.Put({"a", "y"}, Bytes(3)); }), Errc::kStoreFull);
  s.Put({"a", "x"}, Bytes(10));  // replacing frees the old bytes first
  EXPECT_EQ(s.stored_bytes(), 10u);
}

TEST(StoreLatency, PutOf64MiBTakes066Seconds) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  s.Put({"b", "x"}, Bytes(64 * kMiB));
  EXPECT_NEAR(s.counters().virtual_elapsed, kBase + 64.0 / 100.0, 1e-9);
  EXPECT_NEAR(s.counters().virtual_elapsed, 0.66, 1e-9);
}

TEST(StoreLatency, GetOf1GiBTakes1026Seconds) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  s.Put({"b", "x"}, Bytes(1024 * kMiB));
  const double before = s.counters().virtual_elapsed;
  s.Get({"b", "x"});
  EXPECT_NEAR(s.counters().virtual_elapsed - before, kBase + 1024.0 / 100.0, 1e-9);
  EXPECT_NEAR(s.counters().virtual_elapsed - before, 10.26, 1e-9);
}

TEST(StoreLatency, CopyOf64MiBTakes202Seconds) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  s.Put({"b", "x"}, Bytes(64 * kMiB));
  const double before = s.counters().virtual_elapsed;
  s.Copy({"b", "x"}, {"b", "y"});
  EXPECT_NEAR(s.counters().virtual_elapsed - before, kBase + 64.0 / 32.0, 1e-9);
}

TEST(StoreLatency, SmallRequestsCostBaseLatency) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  s.Del({"b", "x"});
  s.List("b", "", std::nullopt);
  EXPECT_NEAR(s.counters().virtual_elapsed, 2 * kBase, 1e-12);
}

TEST(StoreLatency, NoModelMeansNoClock) {
  MemoryObjectStore s;
  s.CreateBucket("b");
  s.Put({"b", "x"}, Bytes(kMiB));
  EXPECT_EQ(s.counters().virtual_elapsed, 0.0);
}

TEST(Multipart, SixteenPartsAndStateEquivalence) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  std::mt19937_64 rng(3);
  Bytes data(64 * kMiB);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  const std::string etag = s.MultipartPut({"b", "m"}, data, 4 * kMiB, 8, {{"k", "v"}});
  EXPECT_EQ(s.counters().puts, 16u);
  EXPECT_EQ(s.counters().bytes_uploaded, 64 * kMiB);
  s.Put({"b", "p"}, data, {{"k", "v"}});
  EXPECT_EQ(etag, s.Head({"b", "p"}).etag);
  EXPECT_EQ(*s.Get({"b", "m"}).data, data);
  EXPECT_EQ(s.GetUserMeta({"b", "m"}), s.GetUserMeta({"b", "p"}));
  EXPECT_EQ(*s.MultipartGet({"b", "m"}, 4 * kMiB, 8), data);
}

TEST(Multipart, ElapsedFallsWithThreadsAndClamps) {
  std::vector<double> elapsed;
  for (int threads : {1, 2, 4, 8, 16}) {
    MemoryObjectStore s(Timed());
    s.CreateBucket("b");
    s.MultipartPut({"b", "m"}, Bytes(64 * kMiB), 4 * kMiB, threads);
    elapsed.push_back(s.counters().virtual_elapsed);
    const std::vector<std::uint64_t> parts(16, 4 * kMiB);
    EXPECT_NEAR(elapsed.back(), ScheduleOracle(parts, std::min(threads, 8)), 1e-9);
  }
  EXPECT_GT(elapsed[0], elapsed[1]);
  EXPECT_GT(elapsed[1], elapsed[2]);
  EXPECT_GT(elapsed[2], elapsed[3]);
  EXPECT_DOUBLE_EQ(elapsed[3], elapsed[4]);
}

TEST(Multipart, UnevenTailPart) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  const std::uint64_t size = 10 * kMiB + 12345;
  s.MultipartPut({"b", "m"}, Bytes(size), 4 * kMiB, 2);
  EXPECT_EQ(s.counters().puts, 3u);
  EXPECT_NEAR(s.counters().virtual_elapsed,
              ScheduleOracle({4 * kMiB, 4 * kMiB, 2 * kMiB + 12345}, 2), 1e-9);
}

TEST(Multipart, GetSpeedupMatchesStreams) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  s.Put({"b", "m"}, Bytes(1024 * kMiB));
  s.reset_counters();
  s.MultipartGet({"b", "m"}, 4 * kMiB, 1);
  const double one = s.counters().virtual_elapsed;
  EXPECT_EQ(s.counters().gets, 256u);
  s.reset_counters();
  s.MultipartGet({"b", "m"}, 4 * kMiB, 8);
  const double eight = s.counters().virtual_elapsed;
  EXPECT_NEAR(one / eight, 8.0, 1e-9);
  EXPECT_NEAR(eight, ScheduleOracle(std::vector<std::uint64_t>(256, 4 * kMiB), 8), 1e-9);
}

TEST(Multipart, OversizedPartIsSingleGet) {
  MemoryObjectStore s;
  s.CreateBucket("b");
  s.Put({"b", "m"}, ToBytes("tiny"));
  s.reset_counters();
  EXPECT_EQ(ToString(*s.MultipartGet({"b", "m"}, 4 * kMiB, 8)), "tiny");
  EXPECT_EQ(s.counters().gets, 1u);
}

TEST(Multipart, RejectsBadArguments) {
  MemoryObjectStore s;
  s.CreateBucket("b");
  EXPECT_EQ(CodeOf([&] { s.MultipartPut({"b", "m"}, Bytes(4), 0, 1); }),
            Errc::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { s.MultipartPut({"b", "m"}, Bytes(4), 1, 0); }),
            Errc::kInvalidArgument);
}

TEST(ParallelGroups, PutManyGetMany) {
  MemoryObjectStore s(Timed());
  s.CreateBucket("b");
  std::vector<PutRequest> reqs;
  for (int i = 0; i < 5; ++i) reqs.push_back({"o" + std::to_string(i), Bytes(kMiB, i)});
  s.PutMany("b", std::move(reqs), 2);
  EXPECT_EQ(s.counters().puts, 5u);
  EXPECT_NEAR(s.counters().virtual_elapsed, ScheduleOracle(std::vector<std::uint64_t>(5, kMiB), 2),
              1e-9);
  const std::vector<std::string> names = {"o4", "o0"};
  auto got = s.GetMany("b", names, 8);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ((*got[0])[0], 4);
  EXPECT_EQ((*got[1])[0], 0);
}

// Random put/del/copy/get/list sequences against a std::map.
TEST(StoreProperty, MatchesMapOracle) {
  MemoryObjectStore s;
  s.CreateBucket("b");
  std::map<std::string, Bytes> oracle;
  std::mt19937_64 rng(11);
  auto name = [&] { return "k" + std::to_string(rng() % 40); };
  std::uint64_t puts = 0, gets = 0, dels = 0, copies = 0;
  for (int i = 0; i < 20000; ++i) {
    const int op = static_cast<int>(rng() % 6);
    const std::string n = name();
    if (op <= 1) {
      Bytes d(rng() % 64);
      for (auto& b : d) b = static_cast<std::uint8_t>(rng());
      if (rng() % 4 == 0) {
        const std::uint64_t part = 1 + rng() % 16;
        s.MultipartPut({"b", n}, d, part, 1 + static_cast<int>(rng() % 8));
        puts += std::max<std::uint64_t>(1, (d.size() + part - 1) / part);
      } else {
        s.Put({"b", n}, d);
        ++puts;
      }
      oracle[n] = d;
    } else if (op == 2) {
      s.Del({"b", n});
      ++dels;
      oracle.erase(n);
    } else if (op == 3) {
      const std::string dst = name();
      ++copies;
      auto it = oracle.find(n);
      if (it == oracle.end()) {
        EXPECT_EQ(CodeOf([&] { s.Copy({"b", n}, {"b", dst}); }), Errc::kNoSuchKey);
      } else {
        s.Copy({"b", n}, {"b", dst});
        oracle[dst] = it->second;
      }
    } else if (op == 4) {
      ++gets;
      auto it = oracle.find(n);
      if (it == oracle.end()) {
        EXPECT_EQ(CodeOf([&] { s.Get({"b", n}); }), Errc::kNoSuchKey);
      } else {
        EXPECT_EQ(*s.Get({"b", n}).data, it->second) << "op " << i;
      }
    } else {
      std::vector<std::string> want;
      for (auto& [k, v] : oracle) want.push_back(k);
      ASSERT_EQ(s.ListAll("b"), want) << "op " << i;
    }
  }
  const OpCounters c = s.counters();
  EXPECT_EQ(c.gets, gets);
  EXPECT_EQ(c.dels, dels);
  EXPECT_EQ(c.copies, copies);
  EXPECT_EQ(c.puts, puts);
}

TEST(StoreConcurrency, ParallelWritersKeepCounters) {
  MemoryObjectStore s;
  s.CreateBucket("b");
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&s, t] {
      for (int i = 0; i < 500; ++i) {
        s.Put({"b", "t" + std::to_string(t) + "/" + std::to_string(i)}, Bytes(3));
      }
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(s.counters().puts, 2000u);
  EXPECT_EQ(s.counters().bytes_uploaded, 6000u);
  EXPECT_EQ(s.ListAll("b").size(), 2000u);
}

TEST(StoreImage, SaveAndLoadRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "objfs_store_image_test").string();
  MemoryObjectStore a;
  a.CreateBucket("b");
  a.CreateBucket("empty");
  a.Put({"b", "x"}, ToBytes("hello"), {{"k", "v"}});
  a.Put({"b", std::string("nul\0name", 8)}, Bytes{0, 1, 2});
  a.SaveImage(path);
  MemoryObjectStore b;
  b.LoadImage(path);
  EXPECT_TRUE(b.BucketExists("empty"));
  EXPECT_EQ(ToString(*b.Get({"b", "x"}).data), "hello");
  EXPECT_EQ(b.GetUserMeta({"b", "x"}).at("k"), "v");
  EXPECT_EQ(*b.Get({"b", std::string("nul\0name", 8)}).data, (Bytes{0, 1, 2}));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace objfs
