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

#include "objfs/object_store.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "objfs/error.h"
#include "objfs/record_io.h"

namespace objfs {
namespace {

constexpr std::string_view kImageMagic = "OFSO";

std::vector<std::uint64_t> PartSizes(std::uint64_t total, std::uint64_t part_size) {
  std::vector<std::uint64_t> parts;
  if (total == 0) {
    parts.push_back(0);
    return parts;
  }
  for (std::uint64_t off = 0; off < total; off += part_size) {
    parts.push_back(std::min(part_size, total - off));
  }
  return parts;
}

void CheckTransferArgs(std::uint64_t part_size, int threads) {
  if (part_size == 0) throw Error(Errc::kInvalidArgument, "part_size must be > 0");
  if (threads < 1) throw Error(Errc::kInvalidArgument, "threads must be >= 1");
}

std::string KeyString(const ObjectKey& key) { return key.bucket + "/" + key.name; }

}  // namespace

void LatencyModel::Validate() const {
  if (!(base_latency_s > 0) || !(bandwidth > 0) || !(copy_bandwidth > 0) ||
      max_parallel_streams < 1) {
    throw Error(Errc::kInvalidArgument, "latency model fields must be positive");
  }
}

double LatencyModel::TransferSeconds(std::uint64_t bytes) const {
  return base_latency_s + static_cast<double>(bytes) / bandwidth;
}

double LatencyModel::CopySeconds(std::uint64_t bytes) const {
  return base_latency_s + static_cast<double>(bytes) / copy_bandwidth;
}

int LatencyModel::EffectiveStreams(int threads) const {
  return std::clamp(threads, 1, max_parallel_streams);
}

double LatencyModel::ParallelSeconds(std::span<const std::uint64_t> sizes,
                                     int threads) const {
  std::vector<double> load(static_cast<std::size_t>(EffectiveStreams(threads)), 0.0);
  for (std::uint64_t size : sizes) {
    auto it = std::min_element(load.begin(), load.end());
    *it += TransferSeconds(size);
  }
  return *std::max_element(load.begin(), load.end());
}

OpCounters OpCounters::operator-(const OpCounters& base) const {
  OpCounters d;
  d.puts = puts - base.puts;
  d.gets = gets - base.gets;
  d.dels = dels - base.dels;
  d.copies = copies - base.copies;
  d.lists = lists - base.lists;
  d.meta_ops = meta_ops - base.meta_ops;
  d.bytes_uploaded = bytes_uploaded - base.bytes_uploaded;
  d.bytes_downloaded = bytes_downloaded - base.bytes_downloaded;
  d.virtual_elapsed = virtual_elapsed - base.virtual_elapsed;
  return d;
}

std::vector<std::string> ObjectStore::ListAll(const std::string& bucket,
                                              const std::string& prefix) {
  std::vector<std::string> all;
  std::optional<std::string> token;
  do {
    ListPage page = List(bucket, prefix, token);
    all.insert(all.end(), page.names.begin(), page.names.end());
    token = std::move(page.next_token);
  } while (token);
  return all;
}

std::string ComputeEtag(ByteView data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::kIo, "digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  // 128 bits is plenty for an entity tag.
  for (unsigned int i = 0; i < 16 && i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

MemoryObjectStore::MemoryObjectStore(StoreConfig config) : config_(std::move(config)) {
  if (config_.latency) config_.latency->Validate();
  if (config_.page_size == 0) throw Error(Errc::kInvalidArgument, "page_size must be > 0");
}

void MemoryObjectStore::CreateBucket(const std::string& bucket) {
  if (bucket.empty()) throw Error(Errc::kInvalidArgument, "empty bucket name");
  std::lock_guard lock(mu_);
  if (buckets_.count(bucket)) return;
  if (buckets_.size() >= config_.max_buckets) {
    throw Error(Errc::kTooManyBuckets, "bucket limit reached creating " + bucket);
  }
  buckets_.emplace(bucket, Bucket{});
}

bool MemoryObjectStore::BucketExists(const std::string& bucket) const {
  std::lock_guard lock(mu_);
  return buckets_.count(bucket) > 0;
}

MemoryObjectStore::Bucket& MemoryObjectStore::BucketOrThrow(const std::string& bucket) {
  auto it = buckets_.find(bucket);
  if (it == buckets_.end()) throw Error(Errc::kUnknownBucket, bucket);
  return it->second;
}

const MemoryObjectStore::Entry& MemoryObjectStore::EntryOrThrow(const ObjectKey& key) {
  Bucket& b = BucketOrThrow(key.bucket);
  auto it = b.find(key.name);
  if (it == b.end()) throw Error(Errc::kNoSuchKey, KeyString(key));
  return it->second;
}

void MemoryObjectStore::CheckName(const ObjectKey& key) const {
  if (key.name.empty()) throw Error(Errc::kInvalidArgument, "empty object name");
}

void MemoryObjectStore::StoreLocked(const ObjectKey& key, Entry entry) {
  Bucket& b = BucketOrThrow(key.bucket);
  auto it = b.find(key.name);
  const std::uint64_t old_size = it == b.end() ? 0 : it->second.data->size();
  const std::uint64_t next = stored_bytes_ - old_size + entry.data->size();
  if (config_.capacity_bytes != 0 && next > config_.capacity_bytes) {
    throw Error(Errc::kStoreFull, KeyString(key));
  }
  stored_bytes_ = next;
  b[key.name] = std::move(entry);
}

void MemoryObjectStore::Advance(double seconds) {
  if (config_.latency) counters_.virtual_elapsed += seconds;
}

std::string MemoryObjectStore::Put(const ObjectKey& key, Bytes data, UserMeta user_meta) {
  CheckName(key);
  std::string etag = ComputeEtag(data);
  const std::uint64_t size = data.size();
  std::lock_guard lock(mu_);
  StoreLocked(key, Entry{std::make_shared<const Bytes>(std::move(data)),
                         std::move(user_meta), etag});
  counters_.puts += 1;
  counters_.bytes_uploaded += size;
  if (config_.latency) Advance(config_.latency->TransferSeconds(size));
  return etag;
}

ObjectRecord MemoryObjectStore::Get(const ObjectKey& key) {
  std::lock_guard lock(mu_);
  BucketOrThrow(key.bucket);
  counters_.gets += 1;
  Bucket& b = buckets_[key.bucket];
  auto it = b.find(key.name);
  if (it == b.end()) {
    if (config_.latency) Advance(config_.latency->RequestSeconds());
    throw Error(Errc::kNoSuchKey, KeyString(key));
  }
  const Entry& e = it->second;
  counters_.bytes_downloaded += e.data->size();
  if (config_.latency) Advance(config_.latency->TransferSeconds(e.data->size()));
  return ObjectRecord{key, e.data, e.user_meta, e.etag};
}

void MemoryObjectStore::Del(const ObjectKey& key) {
  std::lock_guard lock(mu_);
  Bucket& b = BucketOrThrow(key.bucket);
  auto it = b.find(key.name);
  if (it != b.end()) {
    stored_bytes_ -= it->second.data->size();
    b.erase(it);
  }
  counters_.dels += 1;
  if (config_.latency) Advance(config_.latency->RequestSeconds());
}

ListPage MemoryObjectStore::List(const std::string& bucket, const std::string& prefix,
                                 const std::optional<std::string>& token) {
  std::lock_guard lock(mu_);
  Bucket& b = BucketOrThrow(bucket);
  counters_.lists += 1;
  if (config_.latency) Advance(config_.latency->RequestSeconds());
  ListPage page;
  auto it = token ? b.upper_bound(*token) : b.lower_bound(prefix);
  for (; it != b.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) {
      if (it->first > prefix) break;
      continue;
    }
    if (page.names.size() == config_.page_size) {
      page.next_token = page.names.back();
      break;
    }
    page.names.push_back(it->first);
  }
  return page;
}

std::string MemoryObjectStore::Copy(const ObjectKey& src, const ObjectKey& dst) {
  CheckName(dst);
  std::lock_guard lock(mu_);
  BucketOrThrow(dst.bucket);
  BucketOrThrow(src.bucket);
  counters_.copies += 1;
  auto& sb = buckets_[src.bucket];
  auto it = sb.find(src.name);
  if (it == sb.end()) {
    if (config_.latency) Advance(config_.latency->RequestSeconds());
    throw Error(Errc::kNoSuchKey, KeyString(src));
  }
  Entry copy = it->second;
  const std::uint64_t size = copy.data->size();
  std::string etag = copy.etag;
  StoreLocked(dst, std::move(copy));
  if (config_.latency) Advance(config_.latency->CopySeconds(size));
  return etag;
}

std::string MemoryObjectStore::MultipartPut(const ObjectKey& key, Bytes data,
                                            std::uint64_t part_size, int threads,
                                            UserMeta user_meta) {
  CheckName(key);
  CheckTransferArgs(part_size, threads);
  const std::uint64_t size = data.size();
  const std::vector<std::uint64_t> parts = PartSizes(size, part_size);
  std::string etag = ComputeEtag(data);
  std::lock_guard lock(mu_);
  StoreLocked(key, Entry{std::make_shared<const Bytes>(std::move(data)),
                         std::move(user_meta), etag});
  counters_.puts += parts.size();
  counters_.bytes_uploaded += size;
  if (config_.latency) Advance(config_.latency->ParallelSeconds(parts, threads));
  return etag;
}

DataPtr MemoryObjectStore::MultipartGet(const ObjectKey& key, std::uint64_t part_size,
                                        int threads) {
  CheckTransferArgs(part_size, threads);
  std::lock_guard lock(mu_);
  Bucket& b = BucketOrThrow(key.bucket);
  auto it = b.find(key.name);
  if (it == b.end()) {
    counters_.gets += 1;
    if (config_.latency) Advance(config_.latency->RequestSeconds());
    throw Error(Errc::kNoSuchKey, KeyString(key));
  }
  const DataPtr& data = it->second.data;
  const std::vector<std::uint64_t> parts = PartSizes(data->size(), part_size);
  counters_.gets += parts.size();
  counters_.bytes_downloaded += data->size();
  if (config_.latency) Advance(config_.latency->ParallelSeconds(parts, threads));
  return data;
}

void MemoryObjectStore::PutMany(const std::string& bucket,
                                std::vector<PutRequest> requests, int threads) {
  CheckTransferArgs(1, threads);
  std::vector<Entry> entries;
  std::vector<std::uint64_t> sizes;
  for (PutRequest& r : requests) {
    CheckName(ObjectKey{bucket, r.name});
    sizes.push_back(r.data.size());
    std::string etag = ComputeEtag(r.data);
    entries.push_back(Entry{std::make_shared<const Bytes>(std::move(r.data)), {}, etag});
  }
  std::lock_guard lock(mu_);
  Bucket& b = BucketOrThrow(bucket);
  if (config_.capacity_bytes != 0) {
    std::uint64_t next = stored_bytes_;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      auto it = b.find(requests[i].name);
      if (it != b.end()) next -= it->second.data->size();
      next += sizes[i];
    }
    if (next > config_.capacity_bytes) throw Error(Errc::kStoreFull, bucket);
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    StoreLocked(ObjectKey{bucket, requests[i].name}, std::move(entries[i]));
    counters_.puts += 1;
    counters_.bytes_uploaded += sizes[i];
  }
  if (config_.latency && !sizes.empty()) {
    Advance(config_.latency->ParallelSeconds(sizes, threads));
  }
}

std::vector<DataPtr> MemoryObjectStore::GetMany(const std::string& bucket,
                                                std::span<const std::string> names,
                                                int threads) {
  CheckTransferArgs(1, threads);
  std::lock_guard lock(mu_);
  Bucket& b = BucketOrThrow(bucket);
  std::vector<DataPtr> out;
  std::vector<std::uint64_t> sizes;
  counters_.gets += names.size();
  for (const std::string& name : names) {
    auto it = b.find(name);
    if (it == b.end()) {
      if (config_.latency) Advance(config_.latency->RequestSeconds());
      throw Error(Errc::kNoSuchKey, bucket + "/" + name);
    }
    out.push_back(it->second.data);
    sizes.push_back(it->second.data->size());
    counters_.bytes_downloaded += it->second.data->size();
  }
  if (config_.latency && !sizes.empty()) {
    Advance(config_.latency->ParallelSeconds(sizes, threads));
  }
  return out;
}

void MemoryObjectStore::SetUserMeta(const ObjectKey& key, UserMeta user_meta) {
  std::lock_guard lock(mu_);
  BucketOrThrow(key.bucket);
  counters_.meta_ops += 1;
  if (config_.latency) Advance(config_.latency->RequestSeconds());
  auto& b = buckets_[key.bucket];
  auto it = b.find(key.name);
  if (it == b.end()) throw Error(Errc::kNoSuchKey, KeyString(key));
  it->second.user_meta = std::move(user_meta);
}

UserMeta MemoryObjectStore::GetUserMeta(const ObjectKey& key) {
  std::lock_guard lock(mu_);
  BucketOrThrow(key.bucket);
  counters_.meta_ops += 1;
  if (config_.latency) Advance(config_.latency->RequestSeconds());
  return EntryOrThrow(key).user_meta;
}

ObjectInfo MemoryObjectStore::Head(const ObjectKey& key) {
  std::lock_guard lock(mu_);
  BucketOrThrow(key.bucket);
  counters_.meta_ops += 1;
  if (config_.latency) Advance(config_.latency->RequestSeconds());
  const Entry& e = EntryOrThrow(key);
  return ObjectInfo{e.data->size(), e.etag};
}

OpCounters MemoryObjectStore::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

void MemoryObjectStore::reset_counters() {
  std::lock_guard lock(mu_);
  counters_ = OpCounters{};
}

std::uint64_t MemoryObjectStore::stored_bytes() const {
  std::lock_guard lock(mu_);
  return stored_bytes_;
}

// Image layout: one "b" record per bucket, then per object a "d" record
// (payload) followed by an "m" record (user metadata as JSON). Record keys
// are "<tag>\0<bucket>\0<name>".
void MemoryObjectStore::SaveImage(const std::string& path) const {
  std::string out = EncodeHeader(kImageMagic);
  {
    std::lock_guard lock(mu_);
    for (const auto& [bucket, objects] : buckets_) {
      AppendRecord(&out, std::string("b\0", 2) + bucket, std::string_view());
      for (const auto& [name, e] : objects) {
        const std::string base = bucket + std::string(1, '\0') + name;
        AppendRecord(&out, "d" + std::string(1, '\0') + base,
                     std::string_view(reinterpret_cast<const char*>(e.data->data()),
                                      e.data->size()));
        nlohmann::json meta(e.user_meta);
        AppendRecord(&out, "m" + std::string(1, '\0') + base, meta.dump());
      }
    }
  }
  WriteFileAtomically(path, out);
}

void MemoryObjectStore::LoadImage(const std::string& path) {
  const std::string buf = ReadWholeFile(path);
  RecordReader reader(buf, kImageMagic);
  std::map<std::string, Bucket> buckets;
  std::uint64_t total = 0;
  Record rec;
  while (reader.Next(&rec)) {
    if (rec.key.size() < 2 || rec.key[1] != '\0' || !rec.value) {
      throw Error(Errc::kCorrupt, "bad store image record");
    }
    const char tag = rec.key[0];
    const std::string rest = rec.key.substr(2);
    if (tag == 'b') {
      buckets.emplace(rest, Bucket{});
      continue;
    }
    const auto sep = rest.find('\0');
    if (sep == std::string::npos) throw Error(Errc::kCorrupt, "bad object record key");
    Bucket& b = buckets[rest.substr(0, sep)];
    Entry& e = b[rest.substr(sep + 1)];
    if (tag == 'd') {
      Bytes data(rec.value->begin(), rec.value->end());
      e.etag = ComputeEtag(data);
      total += data.size();
      e.data = std::make_shared<const Bytes>(std::move(data));
    } else if (tag == 'm') {
      e.user_meta = nlohmann::json::parse(*rec.value).get<UserMeta>();
    } else {
      throw Error(Errc::kCorrupt, "unknown store image tag");
    }
  }
  std::lock_guard lock(mu_);
  buckets_ = std::move(buckets);
  stored_bytes_ = total;
}

}  // namespace objfs
