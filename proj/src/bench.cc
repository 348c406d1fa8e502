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

#include "objfs/bench.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "objfs/error.h"
#include "objfs/kv_store.h"
#include "objfs/metadata_service.h"
#include "objfs/path.h"

namespace objfs {
namespace {

constexpr std::string_view kPreloadObject = "bench/data";

struct Rig {
  std::shared_ptr<MemoryObjectStore> store;
  std::shared_ptr<MetadataService> meta;
  std::unique_ptr<Filesystem> fs;
};

Rig MakeRig(const BenchConfig& config, int threads) {
  Rig rig;
  rig.store = std::make_shared<MemoryObjectStore>(config.store);
  auto ticks = std::make_shared<std::atomic<std::int64_t>>(0);
  rig.meta = std::make_shared<MetadataService>(std::make_shared<KvStore>(),
                                               [ticks] { return ++*ticks; });
  FsConfig fs = config.fs;
  fs.cache.transfer.threads = threads;
  rig.fs = Filesystem::Mkfs(rig.store, rig.meta, fs);
  return rig;
}

Bytes Pattern(std::uint64_t size, std::mt19937_64& rng) {
  Bytes out(size);
  std::size_t i = 0;
  for (; i + 8 <= size; i += 8) {
    const std::uint64_t v = rng();
    std::memcpy(out.data() + i, &v, 8);
  }
  for (; i < size; ++i) out[i] = static_cast<std::uint8_t>(rng());
  return out;
}

void WriteThroughFs(Filesystem& fs, const std::string& path, std::uint64_t size,
                    std::uint64_t record, std::mt19937_64& rng) {
  FileHandle h = fs.Create(path);
  for (std::uint64_t off = 0; off < size; off += record) {
    const Bytes rec = Pattern(std::min(record, size - off), rng);
    fs.Write(h, off, rec);
  }
  fs.Close(h);
}

// Seeds one file of spec.file_size and returns its path. One-to-one files
// are put straight into the store and imported; chunked files go through
// the file system since an import always yields a single-object file.
std::string Preload(Rig& rig, const WorkloadSpec& spec, std::mt19937_64& rng) {
  Filesystem& fs = *rig.fs;
  if (fs.config().mapping.scheme == MappingScheme::kOneToOne) {
    rig.store->Put(ObjectKey{fs.config().bucket, std::string(kPreloadObject)},
                   Pattern(spec.file_size, rng));
    const ImportReport rep = fs.ImportObjects(std::string(kPreloadObject));
    if (rep.created != 1) throw Error(Errc::kCorrupt, "bench preload import failed");
    if (auto p = ReversePath(fs.config().naming, kPreloadObject)) return NormalizePath(*p);
    return "/imported/" + SanitizeObjectName(kPreloadObject);
  }
  fs.Mkdir("/bench");
  const std::string path = "/bench/data";
  WriteThroughFs(fs, path, spec.file_size, spec.record_size, rng);
  return path;
}

std::string DirName(const std::string& path) { return SplitParent(path).first; }

std::string Sibling(const std::string& path, std::string_view name) {
  const std::string dir = DirName(path);
  return (dir == "/" ? "" : dir) + "/" + std::string(name);
}

std::string NamingLabel(const NamingPolicy& p) {
  if (p.kind == NamingKind::kUserDefined && !p.hook_id.empty()) return p.hook_id;
  return std::string(NamingKindName(p.kind));
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    std::string item = v.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw Error(Errc::kInvalidArgument, "empty value list in grid");
  return out;
}

std::uint64_t ToU64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long out = std::stoull(v, &pos);
    if (pos == v.size()) return out;
  } catch (const std::exception&) {
  }
  throw Error(Errc::kInvalidArgument, key + ": expected an unsigned integer, got '" + v + "'");
}

}  // namespace

std::string_view WorkloadKindName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kStreamRead: return "stream_read";
    case WorkloadKind::kStreamWrite: return "stream_write";
    case WorkloadKind::kRandomWrite: return "random_write";
    case WorkloadKind::kRenameFile: return "rename_file";
    case WorkloadKind::kRenameDir: return "rename_dir";
  }
  return "?";
}

WorkloadKind ParseWorkloadKind(std::string_view s) {
  const std::string l = Lower(s);
  for (WorkloadKind k : {WorkloadKind::kStreamRead, WorkloadKind::kStreamWrite,
                         WorkloadKind::kRandomWrite, WorkloadKind::kRenameFile,
                         WorkloadKind::kRenameDir}) {
    if (l == WorkloadKindName(k)) return k;
  }
  throw Error(Errc::kInvalidArgument, "unknown workload: " + std::string(s));
}

void WorkloadSpec::Validate() const {
  if (record_size == 0) throw Error(Errc::kInvalidArgument, "record size must be positive");
  if (threads <= 0) throw Error(Errc::kInvalidArgument, "threads must be positive");
  if (kind != WorkloadKind::kRenameDir && file_size == 0) {
    throw Error(Errc::kInvalidArgument, "file size must be positive");
  }
  if (kind == WorkloadKind::kRandomWrite && file_size % record_size != 0) {
    // Offsets are whole records, so the file must be too.
    throw Error(Errc::kInvalidArgument, "random writes need file size a multiple of record size");
  }
  if (kind == WorkloadKind::kRenameDir && dir_file_count == 0) {
    throw Error(Errc::kInvalidArgument, "rename_dir needs dir_file_count");
  }
}

LatencyModel CalibratedLatency() {
  LatencyModel m;
  m.base_latency_s = 0.02;
  m.bandwidth = 100.0 * kMiB;
  m.copy_bandwidth = 32.0 * kMiB;
  m.max_parallel_streams = 8;
  return m;
}

BenchSample RunWorkload(const WorkloadSpec& spec, const BenchConfig& config) {
  spec.Validate();
  Rig rig = MakeRig(config, spec.threads);
  Filesystem& fs = *rig.fs;
  std::mt19937_64 rng(spec.seed);

  BenchSample s;
  s.spec = spec;
  s.mapping = std::string(MappingSchemeName(fs.config().mapping.scheme));
  s.naming = NamingLabel(fs.config().naming);
  s.cache = std::string(CacheKindName(fs.config().cache.kind));
  const MappingDescriptor& m = fs.config().mapping;
  s.chunk_size = m.scheme == MappingScheme::kOneToN ? m.chunk_size : 0;

  std::uint64_t app_ops = 1;
  OpCounters start;
  switch (spec.kind) {
    case WorkloadKind::kStreamWrite: {
      fs.Mkdir("/bench");
      start = rig.store->counters();
      FileHandle h = fs.Create("/bench/data");
      app_ops = 0;
      for (std::uint64_t off = 0; off < spec.file_size; off += spec.record_size, ++app_ops) {
        const Bytes rec = Pattern(std::min(spec.record_size, spec.file_size - off), rng);
        fs.Write(h, off, rec);
      }
      s.before_close = rig.store->counters() - start;
      fs.Close(h);
      s.workload_bytes = spec.file_size;
      break;
    }
    case WorkloadKind::kStreamRead: {
      const std::string path = Preload(rig, spec, rng);
      start = rig.store->counters();
      FileHandle h = fs.Open(path, OpenMode::kRead);
      app_ops = 0;
      for (std::uint64_t off = 0; off < spec.file_size; off += spec.record_size, ++app_ops) {
        fs.Read(h, off, spec.record_size);
      }
      s.before_close = rig.store->counters() - start;
      fs.Close(h);
      s.workload_bytes = spec.file_size;
      break;
    }
    case WorkloadKind::kRandomWrite: {
      fs.Mkdir("/bench");
      WriteThroughFs(fs, "/bench/data", spec.file_size, spec.record_size, rng);
      const std::uint64_t slots = spec.file_size / spec.record_size;
      std::vector<std::uint64_t> offsets;
      for (std::uint64_t i = 0; i < spec.op_count; ++i) {
        offsets.push_back((rng() % slots) * spec.record_size);
      }
      start = rig.store->counters();
      FileHandle h = fs.Open("/bench/data", OpenMode::kReadWrite);
      for (std::uint64_t off : offsets) fs.Write(h, off, Pattern(spec.record_size, rng));
      s.before_close = rig.store->counters() - start;
      fs.Close(h);
      app_ops = spec.op_count;
      s.workload_bytes = spec.op_count * spec.record_size;
      break;
    }
    case WorkloadKind::kRenameFile: {
      const std::string path = Preload(rig, spec, rng);
      start = rig.store->counters();
      fs.Rename(path, Sibling(path, "data.renamed"));
      s.before_close = rig.store->counters() - start;
      s.workload_bytes = spec.file_size;
      break;
    }
    case WorkloadKind::kRenameDir: {
      fs.Mkdir("/bench");
      fs.Mkdir("/bench/dir");
      for (std::uint64_t i = 0; i < spec.dir_file_count; ++i) {
        WriteThroughFs(fs, fmt::format("/bench/dir/f{:05d}", i), spec.file_size,
                       spec.record_size, rng);
      }
      start = rig.store->counters();
      fs.Rename("/bench/dir", "/bench/dir.renamed");
      s.before_close = rig.store->counters() - start;
      s.workload_bytes = spec.dir_file_count * spec.file_size;
      break;
    }
  }
  s.delta = rig.store->counters() - start;
  s.virtual_seconds = s.delta.virtual_elapsed;
  s.throughput_mib_s = s.virtual_seconds > 0
                           ? static_cast<double>(s.workload_bytes) / kMiB / s.virtual_seconds
                           : 0.0;
  s.latency_s = s.virtual_seconds / static_cast<double>(std::max<std::uint64_t>(app_ops, 1));
  return s;
}

std::string CsvRow(const BenchSample& s) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6f},{:.6f}",
                     WorkloadKindName(s.spec.kind), s.mapping, s.naming, s.cache, s.spec.threads,
                     static_cast<double>(s.spec.file_size) / kMiB,
                     static_cast<double>(s.chunk_size) / kMiB, s.delta.puts, s.delta.gets,
                     s.delta.dels, s.delta.copies, s.delta.bytes_uploaded,
                     s.delta.bytes_downloaded, s.virtual_seconds, s.throughput_mib_s);
}

std::string Sweep(std::string_view grid_text) {
  static const std::vector<std::string> kAxes = {
      "workload", "mapping",   "naming",    "cache",          "threads",       "file_mib",
      "chunk_mib", "record_mib", "op_count", "dir_file_count", "seed"};
  const auto kv = ParseKeyValues(grid_text);

  ObjfsConfig base;
  base.store.latency = CalibratedLatency();
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const std::string& axis : kAxes) {
    auto it = kv.find(axis);
    if (it != kv.end()) axes.emplace_back(axis, SplitList(it->second));
  }
  for (const auto& [k, v] : kv) {
    if (std::find(kAxes.begin(), kAxes.end(), k) == kAxes.end()) ApplyConfigKey(&base, k, v);
  }
  if (base.store_kind != "memory") {
    throw Error(Errc::kUnsupported, "sweeps run against the in-memory store");
  }

  std::string out(kCsvHeader);
  out += '\n';
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    WorkloadSpec spec;
    BenchConfig config;
    config.fs = base.fs;
    config.store = base.store;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const std::string& key = axes[a].first;
      const std::string& v = axes[a].second[idx[a]];
      if (key == "workload") {
        spec.kind = ParseWorkloadKind(v);
      } else if (key == "mapping") {
        config.fs.mapping.scheme = ParseMappingScheme(v);
      } else if (key == "naming") {
        config.fs.naming = ParseNamingPolicy(v);
      } else if (key == "cache") {
        config.fs.cache.kind = ParseCacheKind(v);
      } else if (key == "threads") {
        spec.threads = static_cast<int>(ToU64(key, v));
      } else if (key == "file_mib") {
        spec.file_size = ToU64(key, v) * kMiB;
      } else if (key == "chunk_mib") {
        config.fs.mapping.chunk_size = ToU64(key, v) * kMiB;
      } else if (key == "record_mib") {
        spec.record_size = ToU64(key, v) * kMiB;
      } else if (key == "op_count") {
        spec.op_count = ToU64(key, v);
      } else if (key == "dir_file_count") {
        spec.dir_file_count = ToU64(key, v);
      } else if (key == "seed") {
        spec.seed = ToU64(key, v);
      }
    }
    out += CsvRow(RunWorkload(spec, config));
    out += '\n';
    // Odometer over the axes, last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace objfs
