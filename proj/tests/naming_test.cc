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

#include "objfs/naming.h"
#include "objfs/path.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "objfs/error.h"

namespace objfs {
namespace {

NameContext Ctx(std::string path, std::uint64_t ino = 2) {
  NameContext c;
  c.path = std::move(path);
  c.ino = ino;
  return c;
}

TEST(BaseName, Definitions) {
  EXPECT_EQ(BaseName(NamingPolicy::FilePath(), Ctx("/docs/a.txt")), "docs/a.txt");
  EXPECT_EQ(BaseName(NamingPolicy::FileName(), Ctx("/docs/a.txt")), "a.txt");
  EXPECT_EQ(BaseName(NamingPolicy::InodeNumber(), Ctx("/x", 2)), "n/0000000000000002");
  EXPECT_EQ(BaseName(NamingPolicy::InodeNumber(), Ctx("/x", 0xabcdef)), "n/0000000000abcdef");
}

TEST(BaseName, InodeNamesAreInjective) {
  std::set<std::string> seen;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t ino = rng();
    const std::string n = BaseName(NamingPolicy::InodeNumber(), Ctx("/x", ino));
    EXPECT_EQ(n.size(), 18u);
    seen.insert(n + "|" + std::to_string(ino));
  }
  std::set<std::string> names;
  for (const auto& s : seen) names.insert(s.substr(0, s.find('|')));
  EXPECT_EQ(names.size(), seen.size());
}

TEST(BaseName, UserHook) {
  const NamingPolicy p = NamingPolicy::UserDefined(
      [](const NameContext& c) { return "user/" + std::to_string(c.uid) + c.path; });
  NameContext c = Ctx("/f");
  c.uid = 42;
  EXPECT_EQ(BaseName(p, c), "user/42/f");
  const NamingPolicy throwing = NamingPolicy::UserDefined(
      [](const NameContext&) -> std::string { throw std::runtime_error("boom"); });
  try {
    BaseName(throwing, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kHookFailure);
  }
  const NamingPolicy empty =
      NamingPolicy::UserDefined([](const NameContext&) { return std::string(); });
  EXPECT_THROW(BaseName(empty, c), Error);
}

TEST(ChunkKey, Formats) {
  EXPECT_EQ(ChunkKey("n/0000000000000002", 0, MappingScheme::kOneToOne), "n/0000000000000002");
  EXPECT_EQ(ChunkKey("n/0000000000000002", 3, MappingScheme::kOneToN),
            "n/0000000000000002.c00000003");
  try {
    ChunkKey("x", 1, MappingScheme::kOneToOne);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBadChunkIndex);
  }
}

TEST(ChunkKey, ListOrderIsChunkOrderAndParses) {
  std::vector<std::string> keys;
  for (std::uint64_t i = 0; i < 1200; i += 7) keys.push_back(ChunkKey("b", i, MappingScheme::kOneToN));
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  for (std::uint64_t i = 0; i < 1200; i += 7) {
    auto parsed = ParseChunkKey(ChunkKey("dir/b", i, MappingScheme::kOneToN));
    ASSERT_TRUE(parsed);
    EXPECT_EQ(parsed->first, "dir/b");
    EXPECT_EQ(parsed->second, i);
  }
  EXPECT_FALSE(ParseChunkKey("plain"));
  EXPECT_FALSE(ParseChunkKey("x.c123"));
  EXPECT_FALSE(ParseChunkKey("x.c0000000a"));
}

TEST(Reverse, PathPoliciesRoundTrip) {
  EXPECT_EQ(ReversePath(NamingPolicy::FilePath(), "docs/a.txt"),
            std::optional<std::string>("/docs/a.txt"));
  EXPECT_EQ(ReversePath(NamingPolicy::FilePath(), "docs/a.txt.c00000004"),
            std::optional<std::string>("/docs/a.txt"));
  EXPECT_FALSE(ReversePath(NamingPolicy::InodeNumber(), "n/0000000000000002"));
  for (const char* path : {"/a", "/a/b/c.txt", "/x y/z"}) {
    const std::string base = BaseName(NamingPolicy::FilePath(), Ctx(path));
    EXPECT_EQ(ReversePath(NamingPolicy::FilePath(), base), std::optional<std::string>(path));
  }
  EXPECT_EQ(ReversePath(NamingPolicy::FileName(), "c.txt"), std::optional<std::string>("/c.txt"));
  EXPECT_FALSE(ReversePath(NamingPolicy::FilePath(), "a/../b"));
  EXPECT_FALSE(ReversePath(NamingPolicy::FilePath(), "a//b"));
}

TEST(Reverse, UserHooks) {
  const NamingPolicy p = NamingPolicyFromHookId("uid-path");
  NameContext c = Ctx("/docs/f");
  c.uid = 7;
  const std::string base = BaseName(p, c);
  EXPECT_EQ(base, "u7/docs/f");
  EXPECT_EQ(ReversePath(p, base), std::optional<std::string>("/docs/f"));
  EXPECT_FALSE(ReversePath(p, "other"));
  EXPECT_FALSE(ReversePath(NamingPolicyFromHookId("ino-name"), "f/01/x"));
  EXPECT_THROW(NamingPolicyFromHookId("nope"), Error);
}

TEST(Sanitize, RoundTripsArbitraryNames) {
  std::mt19937_64 rng(8);
  const std::string alphabet = std::string("ab/%.\0z", 7);
  for (int i = 0; i < 3000; ++i) {
    std::string name;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int j = 0; j < len; ++j) name += alphabet[rng() % alphabet.size()];
    const std::string s = SanitizeObjectName(name);
    EXPECT_EQ(s.find('/'), std::string::npos);
    EXPECT_EQ(s.find('\0'), std::string::npos);
    EXPECT_EQ(UnsanitizeObjectName(s), name);
    EXPECT_TRUE(IsValidEntryName(s)) << s;
  }
  EXPECT_TRUE(IsValidEntryName(SanitizeObjectName(".")));
  EXPECT_TRUE(IsValidEntryName(SanitizeObjectName("..")));
  EXPECT_EQ(SanitizeObjectName("a/b%c"), "a%2Fb%25c");
}

}  // namespace
}  // namespace objfs
