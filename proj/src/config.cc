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

#include "objfs/config.h"

#include <charconv>

#include "objfs/error.h"
#include "objfs/record_io.h"

namespace objfs {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t ParseU64(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(Errc::kInvalidArgument, key + ": expected an unsigned integer, got '" +
                                            std::string(v) + "'");
  }
  return out;
}

double ParseDouble(const std::string& key, std::string_view v) {
  std::string s(v);
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) {
    throw Error(Errc::kInvalidArgument, key + ": expected a number, got '" + s + "'");
  }
  return out;
}

LatencyModel& Latency(ObjfsConfig* c) {
  if (!c->store.latency) c->store.latency = LatencyModel{};
  return *c->store.latency;
}

}  // namespace

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": missing '='");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(Errc::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": empty key");
    }
    out[std::string(key)] = std::string(Trim(line.substr(eq + 1)));
  }
  return out;
}

MappingScheme ParseMappingScheme(std::string_view s) {
  if (s == "1to1") return MappingScheme::kOneToOne;
  if (s == "1toN") return MappingScheme::kOneToN;
  throw Error(Errc::kInvalidArgument, "mapping scheme must be 1to1 or 1toN: " + std::string(s));
}

std::string_view MappingSchemeName(MappingScheme s) {
  return s == MappingScheme::kOneToOne ? "1to1" : "1toN";
}

NamingPolicy ParseNamingPolicy(std::string_view s) {
  if (s == "filename") return NamingPolicy::FileName();
  if (s == "filepath") return NamingPolicy::FilePath();
  if (s == "inode") return NamingPolicy::InodeNumber();
  throw Error(Errc::kInvalidArgument,
              "naming policy must be filename, filepath, inode or user: " + std::string(s));
}

CacheKind ParseCacheKind(std::string_view s) {
  if (s == "none") return CacheKind::kNone;
  if (s == "writeback") return CacheKind::kWriteBack;
  throw Error(Errc::kInvalidArgument, "cache kind must be none or writeback: " + std::string(s));
}

void ApplyConfigKey(ObjfsConfig* c, const std::string& key, const std::string& v) {
  if (key == "store.kind") {
    if (v != "memory" && v != "s3") {
      throw Error(Errc::kInvalidArgument, "store.kind must be memory or s3");
    }
    c->store_kind = v;
  } else if (key == "store.latency.base_s") {
    Latency(c).base_latency_s = ParseDouble(key, v);
  } else if (key == "store.latency.bandwidth_mib_s") {
    Latency(c).bandwidth = ParseDouble(key, v) * kMiB;
  } else if (key == "store.latency.copy_bandwidth_mib_s") {
    Latency(c).copy_bandwidth = ParseDouble(key, v) * kMiB;
  } else if (key == "store.latency.max_streams") {
    Latency(c).max_parallel_streams = static_cast<int>(ParseU64(key, v));
  } else if (key == "store.page_size") {
    c->store.page_size = ParseU64(key, v);
  } else if (key == "store.capacity_mib") {
    c->store.capacity_bytes = ParseU64(key, v) * kMiB;
  } else if (key == "naming.policy") {
    // "user" takes its function from naming.user_hook.
    if (v == "user") {
      if (c->fs.naming.kind != NamingKind::kUserDefined) {
        c->fs.naming = NamingPolicyFromHookId("uid-path");
      }
    } else {
      c->fs.naming = ParseNamingPolicy(v);
    }
  } else if (key == "naming.user_hook") {
    c->fs.naming = NamingPolicyFromHookId(v);
  } else if (key == "mapping.scheme") {
    c->fs.mapping.scheme = ParseMappingScheme(v);
  } else if (key == "mapping.chunk_mib") {
    c->fs.mapping.chunk_size = ParseU64(key, v) * kMiB;
  } else if (key == "cache.kind") {
    c->fs.cache.kind = ParseCacheKind(v);
  } else if (key == "cache.scope") {
    if (v == "local") {
      c->fs.cache.scope = CacheScope::kLocal;
    } else if (v == "unified") {
      c->fs.cache.scope = CacheScope::kUnified;
    } else {
      throw Error(Errc::kInvalidArgument, "cache.scope must be local or unified");
    }
  } else if (key == "cache.capacity_mib") {
    c->fs.cache.capacity_bytes = ParseU64(key, v) * kMiB;
  } else if (key == "cache.multipart_threshold_mib") {
    c->fs.cache.transfer.multipart_threshold = ParseU64(key, v) * kMiB;
  } else if (key == "cache.part_mib") {
    c->fs.cache.transfer.part_size = ParseU64(key, v) * kMiB;
  } else if (key == "cache.threads") {
    c->fs.cache.transfer.threads = static_cast<int>(ParseU64(key, v));
  } else if (key == "fs.bucket") {
    if (v.empty()) throw Error(Errc::kInvalidArgument, "fs.bucket is empty");
    c->fs.bucket = v;
  } else if (key == "fs.metadata_export") {
    if (v == "off") {
      c->fs.metadata_export = MetadataExport::kOff;
    } else if (v == "in_object_meta") {
      c->fs.metadata_export = MetadataExport::kInObjectMeta;
    } else {
      throw Error(Errc::kInvalidArgument, "fs.metadata_export must be off or in_object_meta");
    }
  } else {
    throw Error(Errc::kInvalidArgument, "unknown config key: " + key);
  }
}

ObjfsConfig ParseConfig(std::string_view text) {
  ObjfsConfig c;
  const auto kv = ParseKeyValues(text);
  // naming.user_hook must win over a plain naming.policy = user.
  for (const auto& [k, v] : kv) {
    if (k != "naming.user_hook") ApplyConfigKey(&c, k, v);
  }
  if (auto it = kv.find("naming.user_hook"); it != kv.end()) {
    ApplyConfigKey(&c, it->first, it->second);
  }
  c.fs.mapping.Validate();
  if (c.store.latency) c.store.latency->Validate();
  if (c.fs.cache.transfer.part_size == 0 || c.fs.cache.transfer.threads <= 0) {
    throw Error(Errc::kInvalidArgument, "cache.part_mib and cache.threads must be positive");
  }
  return c;
}

ObjfsConfig LoadConfigFile(const std::string& path) {
  return ParseConfig(ReadWholeFile(path));
}

std::shared_ptr<ObjectStore> MakeStore(const ObjfsConfig& config) {
  if (config.store_kind != "memory") {
    throw Error(Errc::kUnsupported, "store.kind = " + config.store_kind + " is not built in");
  }
  return std::make_shared<MemoryObjectStore>(config.store);
}

}  // namespace objfs
