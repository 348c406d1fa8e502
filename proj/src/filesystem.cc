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

#include "objfs/filesystem.h"

#include <algorithm>
#include <functional>

#include "objfs/error.h"
#include "objfs/path.h"

namespace objfs {
namespace {

std::string ChildPath(const std::string& dir, std::string_view name) {
  return dir == "/" ? "/" + std::string(name) : dir + "/" + std::string(name);
}

bool Readable(OpenMode m) { return m != OpenMode::kWrite; }
bool Writable(OpenMode m) { return m != OpenMode::kRead; }

}  // namespace

Filesystem::Filesystem(std::shared_ptr<ObjectStore> store, std::shared_ptr<MetadataService> meta,
                       FsConfig config, std::shared_ptr<Cache> shared_cache)
    : store_(std::move(store)), meta_(std::move(meta)), config_(std::move(config)) {
  config_.mapping.Validate();
  if (shared_cache && config_.cache.scope == CacheScope::kUnified) {
    cache_ = std::move(shared_cache);
  } else {
    cache_ = std::make_shared<Cache>(store_, config_.cache);
  }
}

Filesystem::~Filesystem() = default;

std::unique_ptr<Filesystem> Filesystem::Mkfs(std::shared_ptr<ObjectStore> store,
                                             std::shared_ptr<MetadataService> meta,
                                             FsConfig config,
                                             std::shared_ptr<Cache> shared_cache) {
  if (meta->IsFormatted()) throw Error(Errc::kAlreadyFormatted, "bucket " + config.bucket);
  if (!store->BucketExists(config.bucket)) store->CreateBucket(config.bucket);
  meta->Format(config.uid, config.gid, config.bucket);
  return std::unique_ptr<Filesystem>(
      new Filesystem(std::move(store), std::move(meta), std::move(config), std::move(shared_cache)));
}

std::unique_ptr<Filesystem> Filesystem::Mount(std::shared_ptr<ObjectStore> store,
                                              std::shared_ptr<MetadataService> meta,
                                              FsConfig config,
                                              std::shared_ptr<Cache> shared_cache) {
  std::optional<std::string> marker = meta->FormatMarker();
  if (!marker) throw Error(Errc::kNotFormatted, "metadata service is not formatted");
  if (*marker != config.bucket) {
    throw Error(Errc::kInvalidArgument, "file system was formatted for bucket " + *marker);
  }
  if (!store->BucketExists(config.bucket)) throw Error(Errc::kUnknownBucket, config.bucket);
  return std::unique_ptr<Filesystem>(
      new Filesystem(std::move(store), std::move(meta), std::move(config), std::move(shared_cache)));
}

// ------------------------------------------------------------------ helpers

FileLayout Filesystem::LayoutOf(const InodeRecord& rec) const {
  return FileLayout{config_.bucket, rec.object_base, rec.mapping};
}

std::vector<std::uint64_t> Filesystem::StoredChunks(const InodeRecord& rec) const {
  std::uint64_t extent = rec.size;
  if (auto cached = cache_->StoredExtent(rec.ino)) {
    if (!*cached) return {};
    extent = **cached;
  }
  std::vector<std::uint64_t> out;
  for (const ChunkExtent& c : Layout(rec.mapping, extent)) out.push_back(c.chunk_idx);
  return out;
}

std::string Filesystem::PathOfDir(InodeNumber dir) const {
  std::vector<std::string> names;
  InodeNumber cur = dir;
  while (cur != kRootIno) {
    const InodeRecord rec = meta_->GetInode(cur);
    std::string name;
    for (auto& [n, ino] : meta_->ReaddirEntries(rec.parent)) {
      if (ino == cur) {
        name = n;
        break;
      }
    }
    if (name.empty()) throw Error(Errc::kCorrupt, "directory without a parent entry");
    names.push_back(std::move(name));
    cur = rec.parent;
  }
  std::reverse(names.begin(), names.end());
  return JoinPath(names);
}

std::pair<InodeNumber, std::string> Filesystem::ResolveParent(std::string_view path) const {
  auto [parent_path, name] = SplitParent(path);
  const InodeNumber parent = meta_->Lookup(parent_path);
  if (meta_->GetInode(parent).kind != InodeKind::kDir) {
    throw Error(Errc::kNotADirectory, parent_path);
  }
  return {parent, name};
}

InodeRecord Filesystem::RequireFile(InodeNumber ino) const {
  InodeRecord rec = meta_->GetInode(ino);
  if (rec.kind == InodeKind::kDir) throw Error(Errc::kIsADirectory, "not a regular file");
  if (rec.kind != InodeKind::kFile) throw Error(Errc::kInvalidArgument, "not a regular file");
  return rec;
}

Filesystem::OpenFile Filesystem::HandleOrThrow(const FileHandle& handle) const {
  std::lock_guard lock(state_mu_);
  auto it = handles_.find(handle.id);
  if (it == handles_.end()) throw Error(Errc::kBadHandle, "unknown file handle");
  return it->second;
}

FileHandle Filesystem::AddHandle(InodeNumber ino, OpenMode mode) {
  std::lock_guard lock(state_mu_);
  if (handles_.size() >= config_.max_open_handles) {
    throw Error(Errc::kTooManyOpenFiles, "open handle limit reached");
  }
  const std::uint64_t id = next_handle_++;
  handles_.emplace(id, OpenFile{ino, mode});
  open_counts_[ino] += 1;
  return FileHandle{id, ino, mode};
}

bool Filesystem::IsOpen(InodeNumber ino) const {
  std::lock_guard lock(state_mu_);
  auto it = open_counts_.find(ino);
  return it != open_counts_.end() && it->second > 0;
}

std::size_t Filesystem::open_handle_count() const {
  std::lock_guard lock(state_mu_);
  return handles_.size();
}

// Deletes a file whose last name is gone and which nobody has open.
void Filesystem::RetireFile(const InodeRecord& rec) {
  const FileLayout layout = LayoutOf(rec);
  for (std::uint64_t idx : StoredChunks(rec)) {
    store_->Del(ObjectKey{config_.bucket, layout.ChunkName(idx)});
  }
  meta_->Transact([&](MetaTxn& t) {
    t.DelInode(rec.ino);
    if (!rec.object_base.empty() && t.BaseOwner(rec.object_base) == rec.ino) {
      t.ReleaseBase(rec.object_base);
    }
  });
}

void Filesystem::ReleaseIfUnreferenced(const InodeRecord& rec) {
  if (rec.nlink > 0) return;
  if (rec.kind == InodeKind::kSymlink) {
    meta_->Transact([&](MetaTxn& t) { t.DelInode(rec.ino); });
    return;
  }
  if (rec.kind != InodeKind::kFile) return;
  {
    std::lock_guard lock(state_mu_);
    auto it = open_counts_.find(rec.ino);
    if (it != open_counts_.end() && it->second > 0) {
      orphans_.insert(rec.ino);
      return;
    }
  }
  RetireFile(rec);
}

// --------------------------------------------------------------- file I/O

FileHandle Filesystem::Create(std::string_view path, std::uint32_t mode) {
  auto [parent, name] = ResolveParent(path);
  if (meta_->FindEntry(parent, name)) throw Error(Errc::kExists, std::string(path));
  InodeRecord tmpl;
  tmpl.kind = InodeKind::kFile;
  tmpl.mode = mode & 07777;
  tmpl.uid = config_.uid;
  tmpl.gid = config_.gid;
  tmpl.mapping = config_.mapping;
  NameContext ctx;
  if (config_.naming.kind != NamingKind::kInodeNumber) {
    ctx.parent_path = PathOfDir(parent);
    ctx.path = ChildPath(ctx.parent_path, name);
  }
  ctx.uid = config_.uid;
  const InodeRecord rec = meta_->CreateNode(parent, name, tmpl, [&](InodeNumber ino) {
    ctx.ino = ino.value;
    return std::optional<std::string>(BaseName(config_.naming, ctx));
  });
  FileHandle h = AddHandle(rec.ino, OpenMode::kReadWrite);
  try {
    cache_->OpenFetch(rec.ino, LayoutOf(rec), 0, /*fresh=*/true);
  } catch (...) {
    std::lock_guard lock(state_mu_);
    handles_.erase(h.id);
    open_counts_[rec.ino] -= 1;
    throw;
  }
  return h;
}

FileHandle Filesystem::Open(std::string_view path, OpenMode mode) {
  const InodeNumber ino = meta_->Lookup(path);
  const InodeRecord rec = RequireFile(ino);
  FileHandle h = AddHandle(ino, mode);
  try {
    std::unique_lock lock(InodeLock(ino));
    // Re-read under the inode lock so the fetch sees a settled size.
    const InodeRecord cur = meta_->GetInode(ino);
    cache_->OpenFetch(ino, LayoutOf(cur), cur.size);
  } catch (...) {
    std::lock_guard lock(state_mu_);
    handles_.erase(h.id);
    open_counts_[ino] -= 1;
    throw;
  }
  return h;
}

void Filesystem::Close(const FileHandle& handle) {
  const OpenFile of = HandleOrThrow(handle);
  bool last = false;
  bool orphan = false;
  {
    std::lock_guard lock(state_mu_);
    handles_.erase(handle.id);
    int& count = open_counts_[of.ino];
    count -= 1;
    if (count <= 0) {
      open_counts_.erase(of.ino);
      last = true;
      orphan = orphans_.erase(of.ino) > 0;
    }
  }
  std::unique_lock lock(InodeLock(of.ino));
  const InodeRecord rec = meta_->GetInode(of.ino);
  if (orphan && last) {
    const std::vector<std::uint64_t> chunks = StoredChunks(rec);
    cache_->FlushClose(of.ino, LayoutOf(rec), /*discard=*/true);
    const FileLayout layout = LayoutOf(rec);
    for (std::uint64_t idx : chunks) store_->Del(ObjectKey{config_.bucket, layout.ChunkName(idx)});
    meta_->Transact([&](MetaTxn& t) {
      t.DelInode(rec.ino);
      if (t.BaseOwner(rec.object_base) == rec.ino) t.ReleaseBase(rec.object_base);
    });
    return;
  }
  cache_->FlushClose(of.ino, LayoutOf(rec));
}

Bytes Filesystem::Read(const FileHandle& handle, std::uint64_t offset, std::uint64_t len) {
  const OpenFile of = HandleOrThrow(handle);
  if (!Readable(of.mode)) throw Error(Errc::kBadHandle, "handle not open for reading");
  std::shared_lock lock(InodeLock(of.ino));
  const InodeRecord rec = meta_->GetInode(of.ino);
  return cache_->Read(of.ino, LayoutOf(rec), offset, len, rec.size);
}

std::uint64_t Filesystem::Write(const FileHandle& handle, std::uint64_t offset, ByteView data) {
  const OpenFile of = HandleOrThrow(handle);
  if (!Writable(of.mode)) throw Error(Errc::kReadOnlyHandle, "handle is read-only");
  std::unique_lock lock(InodeLock(of.ino));
  const InodeRecord rec = meta_->GetInode(of.ino);
  const std::uint64_t new_size = cache_->Write(of.ino, LayoutOf(rec), offset, data, rec.size);
  meta_->Transact([&](MetaTxn& t) {
    InodeRecord cur = t.GetInode(of.ino);
    const InodeRecord prev = cur;
    cur.size = new_size;
    cur.mtime_ns = meta_->Now();
    meta_->TouchCtime(&cur, prev);
    t.PutInode(cur);
  });
  return data.size();
}

// ---------------------------------------------------------- namespace ops

void Filesystem::Unlink(std::string_view path) {
  auto [parent, name] = ResolveParent(path);
  std::optional<InodeNumber> child = meta_->FindEntry(parent, name);
  if (!child) throw Error(Errc::kNotFound, std::string(path));
  if (meta_->GetInode(*child).kind == InodeKind::kDir) {
    throw Error(Errc::kIsADirectory, std::string(path));
  }
  const InodeRecord rec = meta_->UnlinkEntry(parent, name);
  ReleaseIfUnreferenced(rec);
}

void Filesystem::Mkdir(std::string_view path, std::uint32_t mode) {
  auto [parent, name] = ResolveParent(path);
  InodeRecord tmpl;
  tmpl.kind = InodeKind::kDir;
  tmpl.mode = mode & 07777;
  tmpl.uid = config_.uid;
  tmpl.gid = config_.gid;
  meta_->CreateNode(parent, name, tmpl);
}

void Filesystem::Rmdir(std::string_view path) {
  if (NormalizePath(path) == "/") throw Error(Errc::kBusy, "cannot remove root");
  auto [parent, name] = ResolveParent(path);
  std::optional<InodeNumber> child = meta_->FindEntry(parent, name);
  if (!child) throw Error(Errc::kNotFound, std::string(path));
  if (meta_->GetInode(*child).kind != InodeKind::kDir) {
    throw Error(Errc::kNotADirectory, std::string(path));
  }
  meta_->UnlinkEntry(parent, name);
}

std::vector<std::string> Filesystem::Readdir(std::string_view path) {
  return meta_->Readdir(meta_->Lookup(path));
}

InodeRecord Filesystem::Stat(std::string_view path) {
  return meta_->GetInode(meta_->Lookup(path));
}

InodeRecord Filesystem::Lstat(std::string_view path) {
  return meta_->GetInode(meta_->Lookup(path, /*follow_final=*/false));
}

void Filesystem::Chmod(std::string_view path, std::uint32_t mode) {
  const InodeNumber ino = meta_->Lookup(path);
  meta_->Transact([&](MetaTxn& t) {
    InodeRecord rec = t.GetInode(ino);
    const InodeRecord prev = rec;
    rec.mode = mode & 07777;
    meta_->TouchCtime(&rec, prev);
    t.PutInode(rec);
  });
}

void Filesystem::Chown(std::string_view path, std::uint32_t uid, std::uint32_t gid) {
  const InodeNumber ino = meta_->Lookup(path);
  meta_->Transact([&](MetaTxn& t) {
    InodeRecord rec = t.GetInode(ino);
    const InodeRecord prev = rec;
    rec.uid = uid;
    rec.gid = gid;
    meta_->TouchCtime(&rec, prev);
    t.PutInode(rec);
  });
}

void Filesystem::Utimens(std::string_view path, std::int64_t atime_ns, std::int64_t mtime_ns) {
  const InodeNumber ino = meta_->Lookup(path);
  meta_->Transact([&](MetaTxn& t) {
    InodeRecord rec = t.GetInode(ino);
    const InodeRecord prev = rec;
    rec.atime_ns = atime_ns;
    rec.mtime_ns = mtime_ns;
    meta_->TouchCtime(&rec, prev);
    t.PutInode(rec);
  });
}

void Filesystem::Truncate(std::string_view path, std::uint64_t size) {
  const InodeNumber ino = meta_->Lookup(path);
  RequireFile(ino);
  std::unique_lock lock(InodeLock(ino));
  const InodeRecord rec = meta_->GetInode(ino);
  cache_->Truncate(ino, LayoutOf(rec), size, rec.size);
  meta_->Transact([&](MetaTxn& t) {
    InodeRecord cur = t.GetInode(ino);
    const InodeRecord prev = cur;
    cur.size = size;
    cur.mtime_ns = meta_->Now();
    meta_->TouchCtime(&cur, prev);
    t.PutInode(cur);
  });
}

void Filesystem::Symlink(std::string_view target, std::string_view link_path) {
  if (target.empty()) throw Error(Errc::kInvalidArgument, "empty symlink target");
  auto [parent, name] = ResolveParent(link_path);
  InodeRecord tmpl;
  tmpl.kind = InodeKind::kSymlink;
  tmpl.mode = 0777;
  tmpl.uid = config_.uid;
  tmpl.gid = config_.gid;
  tmpl.symlink_target = std::string(target);
  tmpl.size = target.size();
  meta_->CreateNode(parent, name, tmpl);
}

std::string Filesystem::Readlink(std::string_view path) {
  const InodeRecord rec = Lstat(path);
  if (rec.kind != InodeKind::kSymlink) throw Error(Errc::kInvalidArgument, "not a symlink");
  return rec.symlink_target;
}

void Filesystem::Link(std::string_view existing, std::string_view new_path) {
  if (config_.naming.path_derived()) {
    throw Error(Errc::kUnsupported, "hard links need names independent of paths");
  }
  const InodeNumber ino = meta_->Lookup(existing, /*follow_final=*/false);
  auto [parent, name] = ResolveParent(new_path);
  meta_->LinkEntry(parent, name, ino);
}

void Filesystem::CollectFiles(InodeNumber dir, const std::string& dir_path,
                              std::vector<std::pair<InodeRecord, std::string>>* out) const {
  for (auto& [name, ino] : meta_->ReaddirEntries(dir)) {
    InodeRecord rec = meta_->GetInode(ino);
    const std::string path = ChildPath(dir_path, name);
    if (rec.kind == InodeKind::kDir) {
      CollectFiles(ino, path, out);
    } else if (rec.kind == InodeKind::kFile) {
      out->emplace_back(std::move(rec), path);
    }
  }
}

void Filesystem::Rename(std::string_view old_path, std::string_view new_path) {
  auto [old_parent, old_name] = ResolveParent(old_path);
  auto [new_parent, new_name] = ResolveParent(new_path);
  if (!IsValidEntryName(new_name)) throw Error(Errc::kInvalidArgument, "bad entry name");
  const std::optional<InodeNumber> src = meta_->FindEntry(old_parent, old_name);
  if (!src) throw Error(Errc::kNotFound, std::string(old_path));
  if (old_parent == new_parent && old_name == new_name) return;
  const InodeRecord src_rec = meta_->GetInode(*src);

  if (src_rec.kind == InodeKind::kDir) {
    // A directory cannot move beneath itself.
    for (InodeNumber cur = new_parent;; cur = meta_->GetInode(cur).parent) {
      if (cur == *src) throw Error(Errc::kInvalidArgument, "rename into own subtree");
      if (cur == kRootIno) break;
    }
  }

  const std::optional<InodeNumber> target = meta_->FindEntry(new_parent, new_name);
  std::optional<InodeRecord> target_rec;
  if (target) {
    if (*target == *src) return;  // two names of one file
    target_rec = meta_->GetInode(*target);
    const bool src_dir = src_rec.kind == InodeKind::kDir;
    const bool dst_dir = target_rec->kind == InodeKind::kDir;
    if (src_dir && !dst_dir) throw Error(Errc::kNotADirectory, std::string(new_path));
    if (!src_dir && dst_dir) throw Error(Errc::kIsADirectory, std::string(new_path));
    if (dst_dir && !meta_->Readdir(*target).empty()) {
      throw Error(Errc::kNotEmpty, std::string(new_path));
    }
  }

  // Plan object moves for names derived from paths.
  std::vector<ObjectMove> moves;
  std::set<std::string> new_keys;
  if (config_.naming.path_derived()) {
    if (target_rec && target_rec->kind == InodeKind::kFile && IsOpen(target_rec->ino)) {
      throw Error(Errc::kBusy, "rename over an open file with path-derived object names");
    }
    const std::string dest_path = ChildPath(PathOfDir(new_parent), new_name);
    std::vector<std::pair<InodeRecord, std::string>> files;
    if (src_rec.kind == InodeKind::kFile) {
      files.emplace_back(src_rec, dest_path);
    } else if (src_rec.kind == InodeKind::kDir) {
      CollectFiles(*src, dest_path, &files);
    }
    std::set<InodeNumber> moving;
    for (auto& [rec, path] : files) moving.insert(rec.ino);
    for (auto& [rec, path] : files) {
      NameContext ctx;
      ctx.path = path;
      ctx.parent_path = SplitParent(path).first;
      ctx.ino = rec.ino.value;
      ctx.uid = rec.uid;
      std::string base = BaseName(config_.naming, ctx);
      if (base == rec.object_base) continue;
      std::optional<InodeNumber> owner = meta_->BaseOwner(base);
      if (owner && !moving.count(*owner) && !(target && *owner == *target)) {
        throw Error(Errc::kNameConflict, "object name already in use: " + base);
      }
      ObjectMove mv{rec.ino, rec.object_base, std::move(base), StoredChunks(rec)};
      for (std::uint64_t idx : mv.chunks) {
        new_keys.insert(ChunkKey(mv.new_base, idx, rec.mapping.scheme));
      }
      moves.push_back(std::move(mv));
    }
  }

  // Copy phase. On failure, copies made so far are removed and metadata is
  // left untouched.
  std::vector<std::string> copied;
  try {
    for (const ObjectMove& mv : moves) {
      const MappingScheme scheme = meta_->GetInode(mv.ino).mapping.scheme;
      for (std::uint64_t idx : mv.chunks) {
        const ObjectKey from{config_.bucket, ChunkKey(mv.old_base, idx, scheme)};
        const ObjectKey to{config_.bucket, ChunkKey(mv.new_base, idx, scheme)};
        if (store_->SupportsServerSideCopy()) {
          store_->Copy(from, to);
        } else {
          ObjectRecord obj = store_->Get(from);
          store_->Put(to, Bytes(*obj.data), obj.user_meta);
        }
        copied.push_back(to.name);
      }
    }
  } catch (...) {
    std::set<std::string> target_keys;
    if (target_rec && target_rec->kind == InodeKind::kFile) {
      for (std::uint64_t idx : StoredChunks(*target_rec)) {
        target_keys.insert(LayoutOf(*target_rec).ChunkName(idx));
      }
    }
    for (const std::string& name : copied) {
      if (target_keys.count(name)) continue;
      try {
        store_->Del(ObjectKey{config_.bucket, name});
      } catch (...) {
      }
    }
    throw;
  }

  bool retire_target = false;
  InodeRecord target_after;
  meta_->Transact([&](MetaTxn& t) {
    retire_target = false;
    if (t.FindEntry(old_parent, old_name) != src) throw Error(Errc::kNotFound, std::string(old_path));
    if (t.FindEntry(new_parent, new_name) != target) {
      throw Error(Errc::kExists, "rename target changed concurrently");
    }
    std::map<InodeNumber, InodeRecord> recs;
    auto rec = [&](InodeNumber ino) -> InodeRecord& {
      auto it = recs.find(ino);
      if (it == recs.end()) it = recs.emplace(ino, t.GetInode(ino)).first;
      return it->second;
    };
    std::map<InodeNumber, InodeRecord> before;
    auto touch = [&](InodeNumber ino) {
      InodeRecord& r = rec(ino);
      before.emplace(ino, r);
      return &r;
    };
    const std::int64_t now = meta_->Now();

    if (target) {
      InodeRecord* tr = touch(*target);
      t.DelEntry(new_parent, new_name);
      if (tr->kind == InodeKind::kDir) {
        if (!t.ListEntries(*target).empty()) throw Error(Errc::kNotEmpty, std::string(new_path));
        touch(new_parent)->nlink -= 1;
        tr->nlink = 0;
      } else {
        tr->nlink -= 1;
        if (tr->nlink == 0 && tr->kind == InodeKind::kFile && !tr->object_base.empty() &&
            t.BaseOwner(tr->object_base) == *target) {
          t.ReleaseBase(tr->object_base);
        }
      }
    }

    t.DelEntry(old_parent, old_name);
    t.PutEntry(new_parent, new_name, *src);
    InodeRecord* sr = touch(*src);
    if (sr->kind == InodeKind::kDir && old_parent != new_parent) {
      touch(old_parent)->nlink -= 1;
      touch(new_parent)->nlink += 1;
      sr->parent = new_parent;
    }
    touch(old_parent)->mtime_ns = now;
    touch(new_parent)->mtime_ns = now;

    for (const ObjectMove& mv : moves) {
      if (t.BaseOwner(mv.old_base) == mv.ino) t.ReleaseBase(mv.old_base);
    }
    for (const ObjectMove& mv : moves) {
      t.ClaimBase(mv.new_base, mv.ino);
      touch(mv.ino)->object_base = mv.new_base;
    }

    for (auto& [ino, r] : recs) {
      if (target && ino == *target && r.nlink == 0) {
        target_after = r;
        if (r.kind == InodeKind::kDir) {
          t.DelInode(ino);
          continue;
        }
        retire_target = true;
      }
      auto b = before.find(ino);
      if (b != before.end()) meta_->TouchCtime(&r, b->second);
      t.PutInode(r);
    }
  });

  // Old keys that are not reused by the move itself go away.
  for (const ObjectMove& mv : moves) {
    const MappingScheme scheme = meta_->GetInode(mv.ino).mapping.scheme;
    for (std::uint64_t idx : mv.chunks) {
      const std::string old_key = ChunkKey(mv.old_base, idx, scheme);
      if (!new_keys.count(old_key)) store_->Del(ObjectKey{config_.bucket, old_key});
    }
  }

  if (retire_target) {
    if (target_after.kind == InodeKind::kSymlink) {
      meta_->Transact([&](MetaTxn& t) { t.DelInode(target_after.ino); });
    } else {
      bool open = false;
      {
        std::lock_guard lock(state_mu_);
        auto it = open_counts_.find(target_after.ino);
        open = it != open_counts_.end() && it->second > 0;
        if (open) orphans_.insert(target_after.ino);
      }
      if (!open) {
        const FileLayout layout = LayoutOf(target_after);
        for (std::uint64_t idx : StoredChunks(target_after)) {
          const std::string key = layout.ChunkName(idx);
          if (!new_keys.count(key)) store_->Del(ObjectKey{config_.bucket, key});
        }
        meta_->Transact([&](MetaTxn& t) { t.DelInode(target_after.ino); });
      }
    }
  }
}

// -------------------------------------------------------------- dual access

void Filesystem::MkdirAll(const std::string& dir_path) {
  InodeNumber cur = kRootIno;
  for (const std::string& comp : SplitPath(dir_path)) {
    std::optional<InodeNumber> child = meta_->FindEntry(cur, comp);
    if (!child) {
      InodeRecord tmpl;
      tmpl.kind = InodeKind::kDir;
      tmpl.mode = 0755;
      tmpl.uid = config_.uid;
      tmpl.gid = config_.gid;
      try {
        child = meta_->CreateNode(cur, comp, tmpl).ino;
      } catch (const Error& e) {
        if (e.code() != Errc::kExists) throw;
        child = meta_->FindEntry(cur, comp);
      }
    }
    if (!child || meta_->GetInode(*child).kind != InodeKind::kDir) {
      throw Error(Errc::kNotADirectory, dir_path);
    }
    cur = *child;
  }
}

ImportReport Filesystem::ImportObjects(std::string_view prefix) {
  ImportReport report;
  for (const std::string& name : store_->ListAll(config_.bucket, std::string(prefix))) {
    if (meta_->BaseOwner(name)) {
      report.already_owned += 1;
      continue;
    }
    if (auto parsed = ParseChunkKey(name)) {
      if (auto owner = meta_->BaseOwner(parsed->first)) {
        const InodeRecord rec = meta_->GetInode(*owner);
        if (rec.mapping.scheme == MappingScheme::kOneToN) {
          report.already_owned += 1;
          continue;
        }
      }
    }
    std::string path;
    if (std::optional<std::string> p = ReversePath(config_.naming, name)) {
      path = NormalizePath(*p);
    } else {
      path = "/imported/" + SanitizeObjectName(name);
    }
    try {
      auto [parent_path, leaf] = SplitParent(path);
      MkdirAll(parent_path);
      const InodeNumber parent = meta_->Lookup(parent_path);
      if (meta_->FindEntry(parent, leaf)) {
        report.collisions.push_back(name);
        continue;
      }
      const ObjectInfo info = store_->Head(ObjectKey{config_.bucket, name});
      InodeRecord tmpl;
      tmpl.kind = InodeKind::kFile;
      tmpl.mode = 0644;
      tmpl.uid = config_.uid;
      tmpl.gid = config_.gid;
      tmpl.size = info.size;
      tmpl.mapping = MappingDescriptor::OneToOne();
      meta_->CreateNode(parent, leaf, tmpl,
                        [&](InodeNumber) { return std::optional<std::string>(name); });
      report.created += 1;
    } catch (const Error& e) {
      if (e.code() != Errc::kExists && e.code() != Errc::kNameConflict &&
          e.code() != Errc::kNotADirectory && e.code() != Errc::kInvalidArgument) {
        throw;
      }
      report.collisions.push_back(name);
    }
  }
  return report;
}

void Filesystem::SyncMetaToObjects() {
  if (config_.metadata_export != MetadataExport::kInObjectMeta) {
    throw Error(Errc::kUnsupported, "metadata export is disabled");
  }
  for (const InodeRecord& rec : meta_->AllInodes()) {
    if (rec.kind != InodeKind::kFile || rec.nlink == 0) continue;
    const std::vector<std::uint64_t> chunks = StoredChunks(rec);
    if (chunks.empty()) continue;
    const ObjectKey key{config_.bucket, LayoutOf(rec).ChunkName(chunks.front())};
    try {
      UserMeta meta = store_->GetUserMeta(key);
      meta["mode"] = std::to_string(rec.mode);
      meta["uid"] = std::to_string(rec.uid);
      meta["gid"] = std::to_string(rec.gid);
      meta["mtime"] = std::to_string(rec.mtime_ns);
      meta["size"] = std::to_string(rec.size);
      store_->SetUserMeta(key, std::move(meta));
    } catch (const Error& e) {
      if (e.code() != Errc::kNoSuchKey) throw;
    }
  }
}

std::vector<std::string> Filesystem::ObjectNames(std::string_view path) {
  const InodeRecord rec = RequireFile(meta_->Lookup(path));
  std::vector<std::string> names;
  const FileLayout layout = LayoutOf(rec);
  for (const ChunkExtent& c : Layout(rec.mapping, rec.size)) {
    names.push_back(layout.ChunkName(c.chunk_idx));
  }
  return names;
}

void Filesystem::WriteFile(std::string_view path, ByteView data) {
  FileHandle h;
  try {
    h = Create(path);
  } catch (const Error& e) {
    if (e.code() != Errc::kExists) throw;
    Truncate(path, 0);
    h = Open(path, OpenMode::kWrite);
  }
  try {
    if (!data.empty()) Write(h, 0, data);
  } catch (...) {
    Close(h);
    throw;
  }
  Close(h);
}

Bytes Filesystem::ReadFile(std::string_view path) {
  FileHandle h = Open(path, OpenMode::kRead);
  Bytes out;
  try {
    out = Read(h, 0, Stat(path).size);
  } catch (...) {
    Close(h);
    throw;
  }
  Close(h);
  return out;
}

std::vector<std::string> Filesystem::Audit() const {
  std::vector<InodeNumber> orphans;
  {
    std::lock_guard lock(state_mu_);
    orphans.assign(orphans_.begin(), orphans_.end());
  }
  return meta_->Audit(orphans);
}

}  // namespace objfs
