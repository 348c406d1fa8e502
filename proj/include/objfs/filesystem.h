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

#ifndef OBJFS_FILESYSTEM_H_
#define OBJFS_FILESYSTEM_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "objfs/bytes.h"
#include "objfs/cache.h"
#include "objfs/mapping.h"
#include "objfs/metadata_service.h"
#include "objfs/naming.h"
#include "objfs/object_store.h"

namespace objfs {

enum class MetadataExport { kOff, kInObjectMeta };

struct FsConfig {
  std::string bucket = "objfs";
  MappingDescriptor mapping;
  NamingPolicy naming = NamingPolicy::InodeNumber();
  CachePolicy cache;
  MetadataExport metadata_export = MetadataExport::kOff;
  // Owner assigned to imported files and the root directory.
  std::uint32_t uid = 0;
  std::uint32_t gid = 0;
  std::size_t max_open_handles = 1024;
};

enum class OpenMode { kRead, kWrite, kReadWrite };

struct FileHandle {
  std::uint64_t id = 0;
  InodeNumber ino;
  OpenMode mode = OpenMode::kRead;
};

struct ImportReport {
  std::size_t created = 0;
  std::size_t already_owned = 0;
  // Object names skipped because their target path was taken.
  std::vector<std::string> collisions;
};

// POSIX-style file system over an object store. Metadata lives in the
// metadata service; file data lives in objects named by the naming policy
// and laid out by the mapping; the cache decides when bytes move.
class Filesystem {
 public:
  // Formats the metadata service, creates the bucket, and mounts.
  // AlreadyFormatted if the metadata service was formatted before.
  static std::unique_ptr<Filesystem> Mkfs(std::shared_ptr<ObjectStore> store,
                                          std::shared_ptr<MetadataService> meta,
                                          FsConfig config,
                                          std::shared_ptr<Cache> shared_cache = nullptr);
  // Attaches to an already formatted file system. A kUnified cache passed
  // in `shared_cache` is shared with the other mounts holding it.
  static std::unique_ptr<Filesystem> Mount(std::shared_ptr<ObjectStore> store,
                                           std::shared_ptr<MetadataService> meta,
                                           FsConfig config,
                                           std::shared_ptr<Cache> shared_cache = nullptr);

  ~Filesystem();
  Filesystem(const Filesystem&) = delete;
  Filesystem& operator=(const Filesystem&) = delete;

  FileHandle Create(std::string_view path, std::uint32_t mode = 0644);
  FileHandle Open(std::string_view path, OpenMode mode = OpenMode::kReadWrite);
  void Close(const FileHandle& handle);
  Bytes Read(const FileHandle& handle, std::uint64_t offset, std::uint64_t len);
  std::uint64_t Write(const FileHandle& handle, std::uint64_t offset, ByteView data);

  void Unlink(std::string_view path);
  void Mkdir(std::string_view path, std::uint32_t mode = 0755);
  void Rmdir(std::string_view path);
  std::vector<std::string> Readdir(std::string_view path);
  InodeRecord Stat(std::string_view path);
  InodeRecord Lstat(std::string_view path);
  void Chmod(std::string_view path, std::uint32_t mode);
  void Chown(std::string_view path, std::uint32_t uid, std::uint32_t gid);
  void Utimens(std::string_view path, std::int64_t atime_ns, std::int64_t mtime_ns);
  void Truncate(std::string_view path, std::uint64_t size);
  void Symlink(std::string_view target, std::string_view link_path);
  std::string Readlink(std::string_view path);
  void Link(std::string_view existing, std::string_view new_path);
  void Rename(std::string_view old_path, std::string_view new_path);

  // Adopts store objects under `prefix` that no file owns yet.
  ImportReport ImportObjects(std::string_view prefix = "");
  // Copies {mode, uid, gid, mtime, size} into each file's object user
  // metadata. Unsupported unless metadata_export is kInObjectMeta.
  void SyncMetaToObjects();

  // Names of the objects that hold a file's bytes once it is closed, in
  // chunk order.
  std::vector<std::string> ObjectNames(std::string_view path);

  // Whole-file helpers.
  void WriteFile(std::string_view path, ByteView data);
  Bytes ReadFile(std::string_view path);

  std::vector<std::string> Audit() const;

  const FsConfig& config() const { return config_; }
  ObjectStore& store() { return *store_; }
  MetadataService& metadata() { return *meta_; }
  Cache& cache() { return *cache_; }
  std::shared_ptr<Cache> shared_cache() const { return cache_; }
  std::size_t open_handle_count() const;

 private:
  Filesystem(std::shared_ptr<ObjectStore> store, std::shared_ptr<MetadataService> meta,
             FsConfig config, std::shared_ptr<Cache> shared_cache);

  struct OpenFile {
    InodeNumber ino;
    OpenMode mode;
  };

  // One object relocation planned by a rename.
  struct ObjectMove {
    InodeNumber ino;
    std::string old_base;
    std::string new_base;
    std::vector<std::uint64_t> chunks;  // chunk indices present in the store
  };

  FileLayout LayoutOf(const InodeRecord& rec) const;
  // Chunk indices currently materialized in the store for a file.
  std::vector<std::uint64_t> StoredChunks(const InodeRecord& rec) const;
  std::string PathOfDir(InodeNumber dir) const;
  std::pair<InodeNumber, std::string> ResolveParent(std::string_view path) const;
  InodeRecord RequireFile(InodeNumber ino) const;
  OpenFile HandleOrThrow(const FileHandle& handle) const;
  FileHandle AddHandle(InodeNumber ino, OpenMode mode);
  void RetireFile(const InodeRecord& rec);
  void ReleaseIfUnreferenced(const InodeRecord& rec);
  bool IsOpen(InodeNumber ino) const;
  void MkdirAll(const std::string& dir_path);
  std::shared_mutex& InodeLock(InodeNumber ino) {
    return inode_locks_[ino.value % inode_locks_.size()];
  }
  void CollectFiles(InodeNumber dir, const std::string& dir_path,
                    std::vector<std::pair<InodeRecord, std::string>>* out) const;

  std::shared_ptr<ObjectStore> store_;
  std::shared_ptr<MetadataService> meta_;
  FsConfig config_;
  std::shared_ptr<Cache> cache_;

  mutable std::mutex state_mu_;
  std::uint64_t next_handle_ = 1;
  std::unordered_map<std::uint64_t, OpenFile> handles_;
  std::unordered_map<InodeNumber, int> open_counts_;
  std::set<InodeNumber> orphans_;

  std::array<std::shared_mutex, 64> inode_locks_;
};

}  // namespace objfs

#endif  // OBJFS_FILESYSTEM_H_
