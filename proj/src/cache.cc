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

#include "objfs/cache.h"

#include <algorithm>
#include <cstring>

#include "objfs/error.h"
#include "objfs/naming.h"

namespace objfs {

std::string_view CacheKindName(CacheKind kind) {
  return kind == CacheKind::kNone ? "none" : "writeback";
}

std::string FileLayout::ChunkName(std::uint64_t chunk_idx) const {
  return ChunkKey(object_base, chunk_idx, mapping.scheme);
}

// ------------------------------------------------------------------ ChunkIo

Bytes ChunkIo::ReadRange(const FileLayout& layout, std::uint64_t offset, std::uint64_t len,
                         std::uint64_t file_size) {
  if (offset >= file_size) return {};
  len = std::min(len, file_size - offset);
  const std::vector<ChunkSpan> spans = Locate(layout.mapping, offset, len, file_size);
  std::vector<std::string> names;
  for (const ChunkSpan& s : spans) names.push_back(layout.ChunkName(s.chunk_idx));
  std::vector<DataPtr> objects;
  if (names.size() == 1) {
    objects.push_back(store_->Get(ObjectKey{layout.bucket, names[0]}).data);
  } else {
    objects = store_->GetMany(layout.bucket, names, opts_.threads);
  }
  Bytes out(len, 0);
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const ChunkSpan& s = spans[i];
    const Bytes& obj = *objects[i];
    // Bytes beyond a short object read as zeros.
    if (s.intra_offset < obj.size()) {
      const std::uint64_t n = std::min<std::uint64_t>(s.span_len, obj.size() - s.intra_offset);
      std::memcpy(out.data() + pos, obj.data() + s.intra_offset, n);
    }
    pos += s.span_len;
  }
  return out;
}

void ChunkIo::WriteRange(const FileLayout& layout, std::uint64_t offset, ByteView data,
                         std::uint64_t file_size) {
  for (const ChunkAction& a : WritePlan(layout.mapping, offset, data.size(), file_size)) {
    const ObjectKey key{layout.bucket, layout.ChunkName(a.chunk_idx)};
    Bytes obj;
    if (a.kind == ChunkWrite::kReadModifyWrite) {
      DataPtr old = store_->Get(key).data;
      obj.assign(old->begin(), old->begin() + std::min<std::uint64_t>(old->size(),
                                                                      a.new_object_size));
    }
    obj.resize(a.new_object_size, 0);
    if (a.span_len > 0) {
      std::memcpy(obj.data() + a.intra_offset, data.data() + a.src_offset, a.span_len);
    }
    store_->Put(key, std::move(obj));
  }
}

void ChunkIo::Truncate(const FileLayout& layout, std::uint64_t old_size, std::uint64_t new_size) {
  if (new_size == old_size) return;
  if (new_size > old_size) {
    const Bytes zeros(new_size - old_size, 0);
    WriteRange(layout, old_size, zeros, old_size);
    return;
  }
  const MappingDescriptor& m = layout.mapping;
  if (m.scheme == MappingScheme::kOneToOne) {
    const ObjectKey key{layout.bucket, layout.ChunkName(0)};
    Bytes obj;
    if (new_size > 0) {
      DataPtr old = store_->Get(key).data;
      obj.assign(old->begin(), old->begin() + std::min<std::uint64_t>(old->size(), new_size));
      obj.resize(new_size, 0);
    }
    store_->Put(key, std::move(obj));
    return;
  }
  const std::vector<ChunkExtent> before = Layout(m, old_size);
  const std::vector<ChunkExtent> after = Layout(m, new_size);
  for (std::size_t i = after.size(); i < before.size(); ++i) {
    store_->Del(ObjectKey{layout.bucket, layout.ChunkName(before[i].chunk_idx)});
  }
  if (!after.empty() && after.back().object_size != m.chunk_size) {
    const ChunkExtent& last = after.back();
    const ObjectKey key{layout.bucket, layout.ChunkName(last.chunk_idx)};
    DataPtr old = store_->Get(key).data;
    Bytes obj(old->begin(), old->begin() + std::min<std::uint64_t>(old->size(), last.object_size));
    obj.resize(last.object_size, 0);
    store_->Put(key, std::move(obj));
  }
}

Bytes ChunkIo::FetchAll(const FileLayout& layout, std::uint64_t size) {
  Bytes out;
  if (layout.mapping.scheme == MappingScheme::kOneToOne) {
    if (size == 0) return out;
    const ObjectKey key{layout.bucket, layout.ChunkName(0)};
    DataPtr data = size >= opts_.multipart_threshold
                       ? store_->MultipartGet(key, opts_.part_size, opts_.threads)
                       : store_->Get(key).data;
    out.assign(data->begin(), data->end());
    out.resize(size, 0);
    return out;
  }
  const std::vector<std::string> names = ObjectNames(layout, size);
  if (names.empty()) return out;
  std::vector<DataPtr> parts = store_->GetMany(layout.bucket, names, opts_.threads);
  out.reserve(size);
  for (const DataPtr& p : parts) out.insert(out.end(), p->begin(), p->end());
  out.resize(size, 0);
  return out;
}

void ChunkIo::StoreWhole(const FileLayout& layout, Bytes data) {
  if (layout.mapping.scheme == MappingScheme::kOneToN) {
    std::set<std::uint64_t> all;
    for (const ChunkExtent& c : Layout(layout.mapping, data.size())) all.insert(c.chunk_idx);
    StoreChunks(layout, data, all);
    return;
  }
  const ObjectKey key{layout.bucket, layout.ChunkName(0)};
  if (data.size() >= opts_.multipart_threshold) {
    store_->MultipartPut(key, std::move(data), opts_.part_size, opts_.threads);
  } else {
    store_->Put(key, std::move(data));
  }
}

void ChunkIo::StoreChunks(const FileLayout& layout, const Bytes& data,
                          const std::set<std::uint64_t>& chunks) {
  std::vector<PutRequest> reqs;
  for (std::uint64_t idx : chunks) {
    const std::uint64_t start = ChunkStart(layout.mapping, idx);
    if (start >= data.size()) continue;
    const std::uint64_t end = std::min<std::uint64_t>(data.size(), start + layout.mapping.chunk_size);
    reqs.push_back({layout.ChunkName(idx), Bytes(data.begin() + start, data.begin() + end)});
  }
  if (!reqs.empty()) store_->PutMany(layout.bucket, std::move(reqs), opts_.threads);
}

std::vector<std::string> ChunkIo::ObjectNames(const FileLayout& layout, std::uint64_t size) const {
  std::vector<std::string> names;
  for (const ChunkExtent& c : Layout(layout.mapping, size)) {
    names.push_back(layout.ChunkName(c.chunk_idx));
  }
  return names;
}

void ChunkIo::DeleteObjects(const FileLayout& layout, std::uint64_t size) {
  for (const std::string& name : ObjectNames(layout, size)) {
    store_->Del(ObjectKey{layout.bucket, name});
  }
}

// -------------------------------------------------------------------- Cache

Cache::Cache(std::shared_ptr<ObjectStore> store, CachePolicy policy)
    : store_(std::move(store)), policy_(policy), io_(store_.get(), policy.transfer) {
  if (policy_.transfer.part_size == 0 || policy_.transfer.threads < 1) {
    throw Error(Errc::kInvalidArgument, "bad cache transfer options");
  }
}

std::shared_ptr<Cache::Entry> Cache::Find(InodeNumber ino) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(ino);
  return it == entries_.end() ? nullptr : it->second;
}

void Cache::Reserve(std::uint64_t more) {
  if (more > policy_.capacity_bytes - std::min(used_, policy_.capacity_bytes)) {
    throw Error(Errc::kCacheExhausted, "cache capacity exceeded");
  }
  used_ += more;
}

void Cache::Release(std::uint64_t bytes) { used_ -= std::min(used_, bytes); }

void Cache::OpenFetch(InodeNumber ino, const FileLayout& layout, std::uint64_t size, bool fresh) {
  if (policy_.kind == CacheKind::kNone) {
    // No buffering: a new 1=>1 file still gets its object right away.
    if (fresh && layout.mapping.scheme == MappingScheme::kOneToOne) {
      store_->Put(ObjectKey{layout.bucket, layout.ChunkName(0)}, Bytes{});
    }
    return;
  }
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(ino); it != entries_.end()) {
    it->second->open_count += 1;
    return;
  }
  Reserve(size);
  auto e = std::make_shared<Entry>();
  try {
    if (fresh) {
      e->data.assign(size, 0);
      e->must_materialize = layout.mapping.scheme == MappingScheme::kOneToOne;
      if (size > 0) e->dirty.Insert(0, size);
    } else {
      e->data = io_.FetchAll(layout, size);
      e->stored_size = size;
    }
  } catch (...) {
    Release(size);
    throw;
  }
  e->open_count = 1;
  entries_.emplace(ino, std::move(e));
}

Bytes Cache::Read(InodeNumber ino, const FileLayout& layout, std::uint64_t offset,
                  std::uint64_t len, std::uint64_t file_size) {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) return io_.ReadRange(layout, offset, len, file_size);
  std::shared_lock lock(e->mu);
  const std::uint64_t size = e->data.size();
  if (offset >= size) return {};
  const std::uint64_t n = std::min(len, size - offset);
  return Bytes(e->data.begin() + offset, e->data.begin() + offset + n);
}

std::uint64_t Cache::Write(InodeNumber ino, const FileLayout& layout, std::uint64_t offset,
                           ByteView data, std::uint64_t file_size) {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) {
    io_.WriteRange(layout, offset, data, file_size);
    return data.empty() ? file_size : std::max(file_size, offset + data.size());
  }
  std::unique_lock lock(e->mu);
  if (data.empty()) return e->data.size();
  const std::uint64_t end = offset + data.size();
  const std::uint64_t old = e->data.size();
  if (end > old) {
    {
      std::lock_guard g(mu_);
      Reserve(end - old);
    }
    e->data.resize(end, 0);
    // The zero gap is new content too.
    e->dirty.Insert(old, end - old);
  }
  std::memcpy(e->data.data() + offset, data.data(), data.size());
  e->dirty.Insert(offset, data.size());
  return e->data.size();
}

void Cache::Truncate(InodeNumber ino, const FileLayout& layout, std::uint64_t new_size,
                     std::uint64_t file_size) {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) {
    io_.Truncate(layout, file_size, new_size);
    return;
  }
  std::unique_lock lock(e->mu);
  const std::uint64_t old = e->data.size();
  if (new_size > old) {
    {
      std::lock_guard g(mu_);
      Reserve(new_size - old);
    }
    e->data.resize(new_size, 0);
    e->dirty.Insert(old, new_size - old);
  } else if (new_size < old) {
    e->data.resize(new_size);
    e->data.shrink_to_fit();
    {
      std::lock_guard g(mu_);
      Release(old - new_size);
    }
    e->dirty.Clip(new_size);
    const MappingDescriptor& m = layout.mapping;
    if (m.scheme == MappingScheme::kOneToN && new_size % m.chunk_size != 0) {
      const std::uint64_t start = (new_size / m.chunk_size) * m.chunk_size;
      e->dirty.Insert(start, new_size - start);
    }
  }
}

void Cache::FlushLocked(Entry& e, const FileLayout& layout) {
  const std::uint64_t size = e.data.size();
  const bool resized = !e.stored_size || *e.stored_size != size;
  if (e.dirty.empty() && !resized && !e.must_materialize) return;
  if (layout.mapping.scheme == MappingScheme::kOneToOne) {
    io_.StoreWhole(layout, e.data);
  } else {
    const std::uint64_t cs = layout.mapping.chunk_size;
    std::set<std::uint64_t> chunks;
    for (const auto& [s, end] : e.dirty.ranges()) {
      for (std::uint64_t idx = s / cs; idx * cs < end; ++idx) chunks.insert(idx);
    }
    io_.StoreChunks(layout, e.data, chunks);
    if (e.stored_size) {
      const std::size_t keep = Layout(layout.mapping, size).size();
      const std::vector<ChunkExtent> before = Layout(layout.mapping, *e.stored_size);
      for (std::size_t i = keep; i < before.size(); ++i) {
        store_->Del(ObjectKey{layout.bucket, layout.ChunkName(before[i].chunk_idx)});
      }
    }
  }
  e.stored_size = size;
  e.dirty.Clear();
  e.must_materialize = false;
}

bool Cache::FlushClose(InodeNumber ino, const FileLayout& layout, bool discard) {
  if (policy_.kind == CacheKind::kNone) return true;
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(ino);
    if (it == entries_.end()) return true;
    e = it->second;
    if (e->open_count > 0) e->open_count -= 1;
    if (e->open_count > 0) return false;
  }
  std::uint64_t bytes = 0;
  {
    std::unique_lock lock(e->mu);
    if (!discard) FlushLocked(*e, layout);
    bytes = e->data.size();
  }
  std::lock_guard lock(mu_);
  if (e->open_count > 0) return false;
  entries_.erase(ino);
  Release(bytes);
  return true;
}

void Cache::Flush(InodeNumber ino, const FileLayout& layout) {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) return;
  std::unique_lock lock(e->mu);
  FlushLocked(*e, layout);
}

bool Cache::IsCached(InodeNumber ino) const { return Find(ino) != nullptr; }

bool Cache::IsDirty(InodeNumber ino) const {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) return false;
  std::shared_lock lock(e->mu);
  return !e->dirty.empty() || e->must_materialize ||
         !e->stored_size || *e->stored_size != e->data.size();
}

std::optional<std::optional<std::uint64_t>> Cache::StoredExtent(InodeNumber ino) const {
  std::shared_ptr<Entry> e = Find(ino);
  if (!e) return std::nullopt;
  std::shared_lock lock(e->mu);
  return e->stored_size;
}

std::uint64_t Cache::used_bytes() const {
  std::lock_guard lock(mu_);
  return used_;
}

}  // namespace objfs
