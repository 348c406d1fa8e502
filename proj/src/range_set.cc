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

#include "objfs/range_set.h"

#include <algorithm>

namespace objfs {

void RangeSet::Insert(std::uint64_t offset, std::uint64_t len) {
  if (len == 0) return;
  std::uint64_t start = offset;
  std::uint64_t end = offset + len;
  auto it = ranges_.upper_bound(start);
  if (it != ranges_.begin()) {
    auto prev = std::prev(it);
    if (prev->second >= start) it = prev;
  }
  while (it != ranges_.end() && it->first <= end) {
    start = std::min(start, it->first);
    end = std::max(end, it->second);
    it = ranges_.erase(it);
  }
  ranges_.emplace(start, end);
}

void RangeSet::Clip(std::uint64_t limit) {
  auto it = ranges_.lower_bound(limit);
  ranges_.erase(it, ranges_.end());
  if (!ranges_.empty()) {
    auto last = std::prev(ranges_.end());
    if (last->second > limit) last->second = limit;
  }
}

std::uint64_t RangeSet::covered_bytes() const {
  std::uint64_t n = 0;
  for (const auto& [s, e] : ranges_) n += e - s;
  return n;
}

bool RangeSet::Contains(std::uint64_t pos) const {
  auto it = ranges_.upper_bound(pos);
  if (it == ranges_.begin()) return false;
  return std::prev(it)->second > pos;
}

}  // namespace objfs
