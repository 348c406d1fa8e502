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

#ifndef OBJFS_CACHE_H_
#define OBJFS_CACHE_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "objfs/bytes.h"
#include "objfs/mapping.h"
#include "objfs/metadata_service.h"
#include "objfs/object_store.h"
#include "objfs/range_set.h"

namespace objfs {

// Where a file's objects live.
struct FileLayout {
  std::string bucket;
  std::string object_base;
  MappingDescriptor mapping;

  std::string ChunkName(std::uint64_t chunk_idx) const;
};

struct TransferOptions {
  std::uint64_t multipart_threshold = 16 * kMiB;
  std::uint64_t part_size = 4 * kMiB;
  int threads = 8;
};

// Object-level I/O for one file layout, with no buffering: every call maps
// straight onto store requests.
class ChunkIo {
 public:
  ChunkIo(ObjectStore* store, TransferOptions opts) : store_(store), opts_(opts) {}

  // Bytes [offset, offset + len) clamped to file_size; one GET per object
  // touched (the whole object, since the generic interface has no ranges).
  Bytes ReadRange(const FileLayout& layout, std::uint64_t offset, std::uint64_t len,
                  std::uint64_t file_size);
  // Applies one write per WritePlan: a PUT per action, plus a GET first for
  // read-modify-write actions.
  void WriteRange(const FileLayout& layout, std::uint64_t offset, ByteView data,
                  std::uint64_t file_size);
  void Truncate(const FileLayout& layout, std::uint64_t old_size, std::uint64_t new_size);

  // Whole-file transfers, multipart/parallel where worthwhile.
  Bytes FetchAll(const FileLayout& layout, std::uint64_t size);
  void StoreWhole(const FileLayout& layout, Bytes data);
  void StoreChunks(const FileLayout& layout, const Bytes& data,
                   const std::set<std::uint64_t>& chunks);

  std::vector<std::string> ObjectNames(const FileLayout& layout, std::uint64_t size) const;
  void DeleteObjects(const FileLayout& layout, std::uint64_t size);

  const TransferOptions& options() const { return opts_; }

 private:
  ObjectStore* store_;
  TransferOptions opts_;
};

enum class CacheKind { kNone, kWriteBack };
enum class CacheScope { kLocal, kUnified };

struct CachePolicy {
  CacheKind kind = CacheKind::kWriteBack;
  CacheScope scope = CacheScope::kLocal;
  std::uint64_t capacity_bytes = 8192 * kMiB;
  TransferOptions transfer;
};

// Data cache. Under kWriteBack, a file's objects are fetched into one
// buffer on first open, reads and writes touch only the buffer, and dirty
// data goes back to the store on last close. Under kNone every call goes
// straight to the store. A kUnified instance is shared by several mounts.
class Cache {
 public:
  Cache(std::shared_ptr<ObjectStore> store, CachePolicy policy);

  const CachePolicy& policy() const { return policy_; }
  ObjectStore& store() { return *store_; }
  ChunkIo& io() { return io_; }

  // `fresh` marks a file created by this open: nothing is fetched, and a
  // 1=>1 file gets its (possibly empty) object on flush.
  void OpenFetch(InodeNumber ino, const FileLayout& layout, std::uint64_t size,
                 bool fresh = false);
  Bytes Read(InodeNumber ino, const FileLayout& layout, std::uint64_t offset,
             std::uint64_t len, std::uint64_t file_size);
  // Returns the file size after the write.
  std::uint64_t Write(InodeNumber ino, const FileLayout& layout, std::uint64_t offset,
                      ByteView data, std::uint64_t file_size);
  void Truncate(InodeNumber ino, const FileLayout& layout, std::uint64_t new_size,
                std::uint64_t file_size);

  // Drops one open reference. On the last one the entry is flushed (unless
  // `discard`) and evicted; returns true in that case. A failed flush
  // leaves the entry cached and dirty and rethrows.
  bool FlushClose(InodeNumber ino, const FileLayout& layout, bool discard = false);
  // Writes back dirty data without closing.
  void Flush(InodeNumber ino, const FileLayout& layout);

  bool IsCached(InodeNumber ino) const;
  bool IsDirty(InodeNumber ino) const;
  // Size of the object layout currently in the store for a cached file;
  // nullopt if uncached (the store then matches metadata) or if the file
  // has never been written back.
  std::optional<std::optional<std::uint64_t>> StoredExtent(InodeNumber ino) const;
  std::uint64_t used_bytes() const;

 private:
  struct Entry {
    std::shared_mutex mu;
    Bytes data;
    RangeSet dirty;
    int open_count = 0;
    std::optional<std::uint64_t> stored_size;
    bool must_materialize = false;
  };

  std::shared_ptr<Entry> Find(InodeNumber ino) const;
  void Reserve(std::uint64_t more);
  void Release(std::uint64_t bytes);
  void FlushLocked(Entry& e, const FileLayout& layout);

  std::shared_ptr<ObjectStore> store_;
  CachePolicy policy_;
  ChunkIo io_;
  mutable std::mutex mu_;
  std::unordered_map<InodeNumber, std::shared_ptr<Entry>> entries_;
  std::uint64_t used_ = 0;
};

std::string_view CacheKindName(CacheKind kind);

}  // namespace objfs

#endif  // OBJFS_CACHE_H_
