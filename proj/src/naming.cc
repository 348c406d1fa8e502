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

#include <cctype>
#include <cstdio>

#include "objfs/error.h"
#include "objfs/path.h"

namespace objfs {
namespace {

constexpr std::string_view kChunkMarker = ".c";
constexpr std::size_t kChunkDigits = 8;
constexpr std::uint64_t kMaxChunkIndex = 99'999'999;

std::string InodeName(std::uint64_t ino) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "n/%016llx", static_cast<unsigned long long>(ino));
  return buf;
}

}  // namespace

std::string_view NamingKindName(NamingKind kind) {
  switch (kind) {
    case NamingKind::kFileName: return "filename";
    case NamingKind::kFilePath: return "filepath";
    case NamingKind::kInodeNumber: return "inode";
    case NamingKind::kUserDefined: return "user";
  }
  return "unknown";
}

std::string BaseName(const NamingPolicy& policy, const NameContext& ctx) {
  switch (policy.kind) {
    case NamingKind::kFileName: {
      auto [parent, name] = SplitParent(ctx.path);
      return name;
    }
    case NamingKind::kFilePath: {
      std::string p = NormalizePath(ctx.path);
      if (p == "/") throw Error(Errc::kInvalidArgument, "root has no object name");
      return p.substr(1);
    }
    case NamingKind::kInodeNumber:
      return InodeName(ctx.ino);
    case NamingKind::kUserDefined: {
      if (!policy.hook) throw Error(Errc::kHookFailure, "no naming hook installed");
      std::string name;
      try {
        name = policy.hook(ctx);
      } catch (const std::exception& e) {
        throw Error(Errc::kHookFailure, e.what());
      }
      if (name.empty() || name.find('\0') != std::string::npos) {
        throw Error(Errc::kHookFailure, "hook produced an invalid object name");
      }
      return name;
    }
  }
  throw Error(Errc::kInvalidArgument, "unknown naming policy");
}

std::string ChunkKey(std::string_view base, std::uint64_t chunk_idx, MappingScheme scheme) {
  if (scheme == MappingScheme::kOneToOne) {
    if (chunk_idx != 0) throw Error(Errc::kBadChunkIndex, "1=>1 files have only chunk 0");
    return std::string(base);
  }
  if (chunk_idx > kMaxChunkIndex) throw Error(Errc::kBadChunkIndex, "chunk index too large");
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08llu", static_cast<unsigned long long>(chunk_idx));
  std::string out(base);
  out += kChunkMarker;
  out += buf;
  return out;
}

std::optional<std::pair<std::string, std::uint64_t>> ParseChunkKey(std::string_view name) {
  const std::size_t suffix = kChunkMarker.size() + kChunkDigits;
  if (name.size() <= suffix) return std::nullopt;
  const std::size_t at = name.size() - suffix;
  if (name.substr(at, kChunkMarker.size()) != kChunkMarker) return std::nullopt;
  std::uint64_t idx = 0;
  for (char c : name.substr(at + kChunkMarker.size())) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    idx = idx * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return std::make_pair(std::string(name.substr(0, at)), idx);
}

std::optional<std::string> ReversePath(const NamingPolicy& policy, std::string_view object_name) {
  std::string base(object_name);
  if (auto parsed = ParseChunkKey(object_name)) base = parsed->first;
  if (base.empty()) return std::nullopt;
  switch (policy.kind) {
    case NamingKind::kFileName:
    case NamingKind::kFilePath: {
      // Object names with empty or dot components have no faithful path.
      const std::string path = "/" + base;
      for (const std::string& c : SplitPath(path)) {
        if (c == "..") return std::nullopt;
      }
      if (path.find("//") != std::string::npos || base.back() == '/' ||
          path.find("/./") != std::string::npos || base == ".") {
        return std::nullopt;
      }
      return path;
    }
    case NamingKind::kInodeNumber:
      return std::nullopt;
    case NamingKind::kUserDefined:
      if (!policy.reverse_hook) return std::nullopt;
      try {
        return policy.reverse_hook(base);
      } catch (const std::exception&) {
        return std::nullopt;
      }
  }
  return std::nullopt;
}

std::string SanitizeObjectName(std::string_view object_name) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : object_name) {
    if (c == '/' || c == '%' || c == '\0') {
      out += '%';
      out += kHex[(static_cast<unsigned char>(c) >> 4) & 0xF];
      out += kHex[static_cast<unsigned char>(c) & 0xF];
    } else {
      out += c;
    }
  }
  // "." and ".." are not usable entry names.
  if (out == ".") return "%2E";
  if (out == "..") return "%2E%2E";
  return out;
}

std::string UnsanitizeObjectName(std::string_view entry_name) {
  std::string out;
  for (std::size_t i = 0; i < entry_name.size(); ++i) {
    if (entry_name[i] == '%' && i + 2 < entry_name.size() &&
        std::isxdigit(static_cast<unsigned char>(entry_name[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(entry_name[i + 2]))) {
      const std::string hex(entry_name.substr(i + 1, 2));
      out += static_cast<char>(std::stoi(hex, nullptr, 16));
      i += 2;
    } else {
      out += entry_name[i];
    }
  }
  return out;
}

NamingPolicy NamingPolicyFromHookId(std::string_view id) {
  if (id == "uid-path") {
    // "u<uid>/<path>": per-owner object prefixes, reversible.
    return NamingPolicy::UserDefined(
        [](const NameContext& ctx) {
          return "u" + std::to_string(ctx.uid) + NormalizePath(ctx.path);
        },
        [](std::string_view base) -> std::optional<std::string> {
          if (base.size() < 3 || base[0] != 'u') return std::nullopt;
          std::size_t i = 1;
          while (i < base.size() && std::isdigit(static_cast<unsigned char>(base[i]))) ++i;
          if (i == 1 || i >= base.size() || base[i] != '/') return std::nullopt;
          return std::string(base.substr(i));
        },
        "uid-path");
  }
  if (id == "ino-name") {
    // "f/<ino hex>/<file name at creation>": stable across renames.
    return NamingPolicy::UserDefined(
        [](const NameContext& ctx) {
          char buf[24];
          std::snprintf(buf, sizeof(buf), "f/%016llx/", static_cast<unsigned long long>(ctx.ino));
          return std::string(buf) + SplitParent(ctx.path).second;
        },
        {}, "ino-name");
  }
  throw Error(Errc::kInvalidArgument, "unknown naming hook: " + std::string(id));
}

}  // namespace objfs
