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

#ifndef OBJFS_BENCH_H_
#define OBJFS_BENCH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "objfs/config.h"
#include "objfs/filesystem.h"
#include "objfs/object_store.h"

namespace objfs {

enum class WorkloadKind { kStreamRead, kStreamWrite, kRandomWrite, kRenameFile, kRenameDir };

std::string_view WorkloadKindName(WorkloadKind kind);  // "stream_write", ...
WorkloadKind ParseWorkloadKind(std::string_view s);    // case-insensitive

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kStreamWrite;
  // Per-file size; for kRenameDir the size of each file in the directory.
  std::uint64_t file_size = 64 * kMiB;
  std::uint64_t record_size = 4 * kMiB;
  // Writes issued by kRandomWrite.
  std::uint64_t op_count = 16;
  // Files in the directory moved by kRenameDir.
  std::uint64_t dir_file_count = 0;
  int threads = 8;
  std::uint64_t seed = 1;

  void Validate() const;
};

// Calibrated so that a 64 MiB server-side copy takes about 2 s.
LatencyModel CalibratedLatency();

struct BenchConfig {
  FsConfig fs;
  StoreConfig store{.latency = CalibratedLatency()};
};

struct BenchSample {
  WorkloadSpec spec;
  std::string mapping;
  std::string naming;
  std::string cache;
  std::uint64_t chunk_size = 0;
  OpCounters delta;        // measured section only
  OpCounters before_close; // measured section up to the last close
  double virtual_seconds = 0;
  // Application bytes read, written or renamed.
  std::uint64_t workload_bytes = 0;
  double throughput_mib_s = 0;
  double latency_s = 0;  // virtual seconds per application operation
};

// Fresh store, metadata service and file system per call.
BenchSample RunWorkload(const WorkloadSpec& spec, const BenchConfig& config);

inline constexpr std::string_view kCsvHeader =
    "workload,mapping,naming,cache,threads,file_mib,chunk_mib,puts,gets,dels,copies,"
    "bytes_up,bytes_down,virtual_s,throughput_mib_s";

std::string CsvRow(const BenchSample& s);

// Grid file: `key = v1,v2,...`. Axis keys are workload, file_mib,
// record_mib, op_count, dir_file_count, threads, seed, mapping, chunk_mib,
// naming, cache. Anything else is a single-valued config key applied to
// every run. Returns header plus one row per point of the product.
std::string Sweep(std::string_view grid_text);

}  // namespace objfs

#endif  // OBJFS_BENCH_H_
