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

#ifndef OBJFS_NAMING_H_
#define OBJFS_NAMING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "objfs/mapping.h"

namespace objfs {

enum class NamingKind { kFileName, kFilePath, kInodeNumber, kUserDefined };

// File identity handed to a naming policy when a file is created.
struct NameContext {
  std::string path;  // absolute, normalized
  std::uint64_t ino = 0;
  std::uint32_t uid = 0;
  std::string parent_path;
};

using NameHook = std::function<std::string(const NameContext&)>;
using ReverseNameHook = std::function<std::optional<std::string>(std::string_view)>;

struct NamingPolicy {
  NamingKind kind = NamingKind::kInodeNumber;
  NameHook hook;                 // kUserDefined only
  ReverseNameHook reverse_hook;  // optional
  std::string hook_id;           // registry id, for reporting

  static NamingPolicy FileName() { return {NamingKind::kFileName, {}, {}, {}}; }
  static NamingPolicy FilePath() { return {NamingKind::kFilePath, {}, {}, {}}; }
  static NamingPolicy InodeNumber() { return {NamingKind::kInodeNumber, {}, {}, {}}; }
  static NamingPolicy UserDefined(NameHook hook, ReverseNameHook reverse = {},
                                  std::string id = "custom") {
    return {NamingKind::kUserDefined, std::move(hook), std::move(reverse), std::move(id)};
  }

  // Object names follow the file's path, so renames move objects.
  bool path_derived() const {
    return kind == NamingKind::kFileName || kind == NamingKind::kFilePath;
  }
};

// Base object name for a new file:
//   file-name   -> last path component
//   file-path   -> full path without the leading '/'
//   inode       -> "n/" + 16 hex digits
//   user        -> hook output
// Throws HookFailure if the hook throws or yields an unusable name.
std::string BaseName(const NamingPolicy& policy, const NameContext& ctx);

// Object name of one chunk: the base itself for 1=>1 (index must be 0),
// base + ".c" + 8 decimal digits for 1=>N.
std::string ChunkKey(std::string_view base, std::uint64_t chunk_idx, MappingScheme scheme);

// Splits a 1=>N chunk suffix off an object name, if present.
std::optional<std::pair<std::string, std::uint64_t>> ParseChunkKey(std::string_view name);

// File path an object name corresponds to, or nullopt when the name cannot
// be resolved without file-system metadata (inode naming).
std::optional<std::string> ReversePath(const NamingPolicy& policy, std::string_view object_name);

// Reversible escaping of an object name into a single directory entry name.
std::string SanitizeObjectName(std::string_view object_name);
std::string UnsanitizeObjectName(std::string_view entry_name);

// Built-in user-defined hooks, selected by id: "uid-path" and "ino-name".
// Throws InvalidArgument for unknown ids.
NamingPolicy NamingPolicyFromHookId(std::string_view id);

std::string_view NamingKindName(NamingKind kind);

}  // namespace objfs

#endif  // OBJFS_NAMING_H_
