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

#ifndef OBJFS_METADATA_SERVICE_H_
#define OBJFS_METADATA_SERVICE_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "objfs/error.h"
#include "objfs/kv_store.h"
#include "objfs/mapping.h"

namespace objfs {

struct InodeNumber {
  std::uint64_t value = 0;
  auto operator<=>(const InodeNumber&) const = default;
};

inline constexpr InodeNumber kRootIno{1};

enum class InodeKind { kFile, kDir, kSymlink };

struct InodeRecord {
  InodeNumber ino;
  InodeKind kind = InodeKind::kFile;
  std::uint32_t mode = 0644;
  std::uint32_t uid = 0;
  std::uint32_t gid = 0;
  std::uint64_t size = 0;
  std::uint32_t nlink = 0;
  std::int64_t atime_ns = 0;
  std::int64_t mtime_ns = 0;
  std::int64_t ctime_ns = 0;
  MappingDescriptor mapping;   // files
  std::string object_base;     // files: name recorded at creation
  std::string symlink_target;  // symlinks
  InodeNumber parent;          // directories: the single parent entry

  friend bool operator==(const InodeRecord&, const InodeRecord&) = default;
};

std::string EncodeInode(const InodeRecord& rec);
InodeRecord DecodeInode(std::string_view bytes);

struct DirEntry {
  InodeNumber parent;
  std::string name;
  InodeNumber child;
};

// KV layout:
//   i/<ino hex16>            -> inode record
//   d/<parent hex16>/<name>  -> child ino (hex16)
//   b/<object base>          -> owning ino (hex16)
//   s/next_ino, s/formatted  -> allocator and format marker
std::string InodeKey(InodeNumber ino);
std::string EntryPrefix(InodeNumber parent);
std::string EntryKey(InodeNumber parent, std::string_view name);
std::string BaseKey(std::string_view base);

// A read-tracking transaction over the metadata KV. Every value read is
// recorded as a commit precondition, so a transaction whose inputs changed
// before commit fails with TxnConflict and is retried by Transact().
class MetaTxn {
 public:
  explicit MetaTxn(KvStore* kv) : kv_(kv) {}

  std::optional<InodeRecord> FindInode(InodeNumber ino);
  InodeRecord GetInode(InodeNumber ino);  // NotFound
  std::optional<InodeNumber> FindEntry(InodeNumber parent, std::string_view name);
  std::vector<std::pair<std::string, InodeNumber>> ListEntries(InodeNumber dir);
  std::optional<InodeNumber> BaseOwner(std::string_view base);
  std::optional<std::string> GetRaw(const std::string& key);

  void PutInode(const InodeRecord& rec);
  void DelInode(InodeNumber ino);
  void PutEntry(InodeNumber parent, std::string_view name, InodeNumber child);
  void DelEntry(InodeNumber parent, std::string_view name);
  // NameConflict if another inode owns the base.
  void ClaimBase(std::string_view base, InodeNumber owner);
  void ReleaseBase(std::string_view base);
  void PutRaw(const std::string& key, std::string value);

  void Commit();

 private:
  std::optional<std::string> Read(const std::string& key);
  void Write(const std::string& key, std::optional<std::string> value);

  KvStore* kv_;
  std::map<std::string, std::optional<std::string>> observed_;
  std::map<std::string, std::optional<std::string>> pending_;
  std::vector<KvTxn::ExpectScan> scans_;
};

// Independent metadata placement: inode table and namespace in a
// transactional key-value store. Never touches the object store.
class MetadataService {
 public:
  using Clock = std::function<std::int64_t()>;

  static constexpr int kMaxSymlinkDepth = 40;

  explicit MetadataService(std::shared_ptr<KvStore> kv, Clock clock = {});

  // Creates the root directory. AlreadyFormatted on a second call.
  void Format(std::uint32_t uid = 0, std::uint32_t gid = 0, std::string marker = "");
  bool IsFormatted() const;
  std::optional<std::string> FormatMarker() const;

  InodeNumber AllocIno();

  InodeRecord GetInode(InodeNumber ino) const;
  void PutInode(InodeNumber ino, const InodeRecord& rec);

  // Resolves an absolute path. Symlinks in intermediate components are
  // always followed; the final component only when follow_final is set.
  InodeNumber Lookup(std::string_view path, bool follow_final = true) const;
  std::optional<InodeNumber> FindEntry(InodeNumber parent, std::string_view name) const;
  std::vector<std::string> Readdir(InodeNumber dir) const;
  std::vector<std::pair<std::string, InodeNumber>> ReaddirEntries(InodeNumber dir) const;

  // Adds a name for an existing inode, bumping its link count.
  void LinkEntry(InodeNumber parent, std::string_view name, InodeNumber child);
  // Removes a name. Directories must be empty. Returns the child record as
  // it stands afterwards (nlink 0 means the last name is gone; the record
  // itself is kept for the caller to retire).
  InodeRecord UnlinkEntry(InodeNumber parent, std::string_view name);

  // Allocates an inode, stores the record and links it under parent in one
  // transaction. Optionally claims an object base name for the new inode.
  InodeRecord CreateNode(InodeNumber parent, std::string_view name, InodeRecord tmpl,
                         const std::function<std::optional<std::string>(InodeNumber)>&
                             base_for = {});

  std::optional<InodeNumber> BaseOwner(std::string_view base) const;
  std::vector<InodeRecord> AllInodes() const;

  // Structural audit: rooted tree over directories, link counts, dangling
  // entries. Returns human-readable problems; empty when consistent.
  // Inodes listed in `orphans` may legitimately have no entries.
  std::vector<std::string> Audit(const std::vector<InodeNumber>& orphans = {}) const;

  // Runs body against a fresh MetaTxn and commits, retrying on conflict.
  template <typename Body>
  auto Transact(Body&& body) {
    for (int attempt = 0;; ++attempt) {
      MetaTxn txn(kv_.get());
      try {
        if constexpr (std::is_void_v<decltype(body(txn))>) {
          body(txn);
          txn.Commit();
          return;
        } else {
          auto result = body(txn);
          txn.Commit();
          return result;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::kTxnConflict || attempt >= kMaxRetries) throw;
      }
    }
  }

  std::int64_t Now() const { return clock_(); }
  KvStore& kv() { return *kv_; }

  // Stamps ctime so that it never moves backwards for an inode.
  void TouchCtime(InodeRecord* rec, const std::optional<InodeRecord>& prev) const;

 private:
  static constexpr int kMaxRetries = 1000;

  std::shared_ptr<KvStore> kv_;
  Clock clock_;
};

std::int64_t SystemClockNs();

}  // namespace objfs

template <>
struct std::hash<objfs::InodeNumber> {
  std::size_t operator()(const objfs::InodeNumber& i) const noexcept {
    return std::hash<std::uint64_t>{}(i.value);
  }
};

#endif  // OBJFS_METADATA_SERVICE_H_
