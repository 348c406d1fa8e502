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

#ifndef OBJFS_RANGE_SET_H_
#define OBJFS_RANGE_SET_H_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace objfs {

// Ordered set of disjoint, non-adjacent half-open byte ranges. Inserting
// a range merges it with every range it overlaps or touches.
class RangeSet {
 public:
  void Insert(std::uint64_t offset, std::uint64_t len);
  // Drops everything at or beyond `limit`.
  void Clip(std::uint64_t limit);
  void Clear() { ranges_.clear(); }

  bool empty() const { return ranges_.empty(); }
  std::size_t size() const { return ranges_.size(); }
  std::uint64_t covered_bytes() const;
  bool Contains(std::uint64_t pos) const;

  // (start, end) pairs in ascending order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges() const {
    return {ranges_.begin(), ranges_.end()};
  }

 private:
  std::map<std::uint64_t, std::uint64_t> ranges_;  // start -> end
};

}  // namespace objfs

#endif  // OBJFS_RANGE_SET_H_
