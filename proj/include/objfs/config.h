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

#ifndef OBJFS_CONFIG_H_
#define OBJFS_CONFIG_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "objfs/filesystem.h"
#include "objfs/object_store.h"

namespace objfs {

// Flat `key = value` text. Blank lines and lines starting with '#' are
// ignored; later assignments win. Malformed lines are InvalidArgument.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

struct ObjfsConfig {
  std::string store_kind = "memory";
  StoreConfig store;
  FsConfig fs;
};

// Applies one key to `config`. InvalidArgument for unknown keys or values.
void ApplyConfigKey(ObjfsConfig* config, const std::string& key, const std::string& value);

// Parses a whole config text on top of the defaults. Keys:
//   store.kind, store.latency.{base_s,bandwidth_mib_s,copy_bandwidth_mib_s,
//   max_streams}, store.page_size, store.capacity_mib, naming.policy,
//   naming.user_hook, mapping.scheme, mapping.chunk_mib, cache.kind,
//   cache.scope, cache.capacity_mib, cache.multipart_threshold_mib,
//   cache.part_mib, cache.threads, fs.bucket, fs.metadata_export.
ObjfsConfig ParseConfig(std::string_view text);
ObjfsConfig LoadConfigFile(const std::string& path);

// Only the in-memory backend ships; "s3" is Unsupported.
std::shared_ptr<ObjectStore> MakeStore(const ObjfsConfig& config);

// Parsers shared with the CLI.
MappingScheme ParseMappingScheme(std::string_view s);
NamingPolicy ParseNamingPolicy(std::string_view s);
CacheKind ParseCacheKind(std::string_view s);
std::string_view MappingSchemeName(MappingScheme s);

}  // namespace objfs

#endif  // OBJFS_CONFIG_H_
