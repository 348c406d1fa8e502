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

#ifndef OBJFS_MAPPING_H_
#define OBJFS_MAPPING_H_

#include <cstdint>
#include <vector>

#include "objfs/bytes.h"

namespace objfs {

enum class MappingScheme { kOneToOne, kOneToN };

// How a file's bytes are laid out over objects. Fixed at file creation.
struct MappingDescriptor {
  MappingScheme scheme = MappingScheme::kOneToOne;
  std::uint64_t chunk_size = 4 * kMiB;  // used by kOneToN only

  static MappingDescriptor OneToOne() { return {}; }
  static MappingDescriptor OneToN(std::uint64_t chunk_size) {
    return {MappingScheme::kOneToN, chunk_size};
  }

  void Validate() const;
  friend bool operator==(const MappingDescriptor&, const MappingDescriptor&) = default;
};

struct ChunkSpan {
  std::uint64_t chunk_idx = 0;
  std::uint64_t intra_offset = 0;
  std::uint64_t span_len = 0;
  friend bool operator==(const ChunkSpan&, const ChunkSpan&) = default;
};

enum class ChunkWrite { kFullOverwrite, kReadModifyWrite };

// One object rewrite needed to apply a write. Chunks between the old end
// of file and the write are included with span_len 0: they are zero-filled
// (or zero-extended) so the object layout stays dense.
struct ChunkAction {
  std::uint64_t chunk_idx = 0;
  ChunkWrite kind = ChunkWrite::kFullOverwrite;
  std::uint64_t intra_offset = 0;
  std::uint64_t span_len = 0;
  // Offset of this span within the caller's write buffer.
  std::uint64_t src_offset = 0;
  std::uint64_t old_object_size = 0;
  std::uint64_t new_object_size = 0;
};

struct ChunkExtent {
  std::uint64_t chunk_idx = 0;
  std::uint64_t object_size = 0;
  friend bool operator==(const ChunkExtent&, const ChunkExtent&) = default;
};

// Spans covering [offset, offset + len) in order. Empty for len == 0.
std::vector<ChunkSpan> Locate(const MappingDescriptor& desc, std::uint64_t offset,
                              std::uint64_t len, std::uint64_t file_size);

std::vector<ChunkAction> WritePlan(const MappingDescriptor& desc, std::uint64_t offset,
                                   std::uint64_t len, std::uint64_t file_size);

// Objects backing a file of the given size. A 1=>1 file is always exactly
// one object, including the empty file; a 1=>N file of size 0 has none.
std::vector<ChunkExtent> Layout(const MappingDescriptor& desc, std::uint64_t file_size);

// Absolute file offset of the first byte of a chunk.
std::uint64_t ChunkStart(const MappingDescriptor& desc, std::uint64_t chunk_idx);

}  // namespace objfs

#endif  // OBJFS_MAPPING_H_
