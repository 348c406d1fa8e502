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

#include "objfs/mapping.h"

#include <algorithm>

#include "objfs/error.h"

namespace objfs {

void MappingDescriptor::Validate() const {
  if (scheme == MappingScheme::kOneToN && chunk_size == 0) {
    throw Error(Errc::kInvalidArgument, "chunk_size must be > 0");
  }
}

std::uint64_t ChunkStart(const MappingDescriptor& desc, std::uint64_t chunk_idx) {
  return desc.scheme == MappingScheme::kOneToOne ? 0 : chunk_idx * desc.chunk_size;
}

std::vector<ChunkSpan> Locate(const MappingDescriptor& desc, std::uint64_t offset,
                              std::uint64_t len, std::uint64_t /*file_size*/) {
  std::vector<ChunkSpan> spans;
  if (len == 0) return spans;
  if (desc.scheme == MappingScheme::kOneToOne) {
    spans.push_back({0, offset, len});
    return spans;
  }
  const std::uint64_t cs = desc.chunk_size;
  const std::uint64_t end = offset + len;
  for (std::uint64_t pos = offset; pos < end;) {
    const std::uint64_t idx = pos / cs;
    const std::uint64_t intra = pos - idx * cs;
    const std::uint64_t n = std::min(cs - intra, end - pos);
    spans.push_back({idx, intra, n});
    pos += n;
  }
  return spans;
}

std::vector<ChunkAction> WritePlan(const MappingDescriptor& desc, std::uint64_t offset,
                                   std::uint64_t len, std::uint64_t file_size) {
  std::vector<ChunkAction> plan;
  if (len == 0) return plan;
  const std::uint64_t end = offset + len;
  const std::uint64_t new_size = std::max(file_size, end);

  if (desc.scheme == MappingScheme::kOneToOne) {
    ChunkAction a;
    a.chunk_idx = 0;
    a.intra_offset = offset;
    a.span_len = len;
    a.old_object_size = file_size;
    a.new_object_size = new_size;
    const bool covers = offset == 0 && end >= file_size;
    a.kind = (file_size == 0 || covers) ? ChunkWrite::kFullOverwrite
                                        : ChunkWrite::kReadModifyWrite;
    plan.push_back(a);
    return plan;
  }

  const std::uint64_t cs = desc.chunk_size;
  std::uint64_t first = offset / cs;
  if (offset > file_size) first = std::min(first, file_size / cs);
  const std::uint64_t last = (end - 1) / cs;
  auto live = [cs](std::uint64_t size, std::uint64_t start) {
    return size > start ? std::min(cs, size - start) : 0;
  };
  for (std::uint64_t idx = first; idx <= last; ++idx) {
    const std::uint64_t start = idx * cs;
    ChunkAction a;
    a.chunk_idx = idx;
    a.old_object_size = live(file_size, start);
    a.new_object_size = live(new_size, start);
    const std::uint64_t ws = std::max(offset, start);
    const std::uint64_t we = std::min(end, start + cs);
    if (we > ws) {
      a.intra_offset = ws - start;
      a.span_len = we - ws;
      a.src_offset = ws - offset;
    }
    if (a.span_len == 0 && a.old_object_size == a.new_object_size) continue;
    const bool covers = a.intra_offset == 0 && a.span_len >= a.old_object_size;
    a.kind = (a.old_object_size == 0 || covers) ? ChunkWrite::kFullOverwrite
                                                : ChunkWrite::kReadModifyWrite;
    plan.push_back(a);
  }
  return plan;
}

std::vector<ChunkExtent> Layout(const MappingDescriptor& desc, std::uint64_t file_size) {
  std::vector<ChunkExtent> out;
  if (desc.scheme == MappingScheme::kOneToOne) {
    out.push_back({0, file_size});
    return out;
  }
  for (std::uint64_t start = 0, idx = 0; start < file_size; start += desc.chunk_size, ++idx) {
    out.push_back({idx, std::min(desc.chunk_size, file_size - start)});
  }
  return out;
}

}  // namespace objfs
