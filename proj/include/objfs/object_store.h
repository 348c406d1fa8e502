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

#ifndef OBJFS_OBJECT_STORE_H_
#define OBJFS_OBJECT_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "objfs/bytes.h"

namespace objfs {

struct ObjectKey {
  std::string bucket;
  std::string name;

  friend bool operator==(const ObjectKey&, const ObjectKey&) = default;
};

using UserMeta = std::map<std::string, std::string>;
using DataPtr = std::shared_ptr<const Bytes>;

struct ObjectRecord {
  ObjectKey key;
  DataPtr data;
  UserMeta user_meta;
  std::string etag;
};

struct ObjectInfo {
  std::uint64_t size = 0;
  std::string etag;
};

// Simulated request cost. A single transfer of S bytes on one stream takes
// base_latency_s + S / bandwidth. Transfers declared as one parallel group
// are list-scheduled over min(threads, max_parallel_streams) streams and
// the group completes when the busiest stream drains.
struct LatencyModel {
  double base_latency_s = 0.02;
  double bandwidth = 100.0 * kMiB;      // bytes/s per stream
  double copy_bandwidth = 32.0 * kMiB;  // bytes/s for server-side copy
  int max_parallel_streams = 8;

  void Validate() const;
  double RequestSeconds() const { return base_latency_s; }
  double TransferSeconds(std::uint64_t bytes) const;
  double CopySeconds(std::uint64_t bytes) const;
  int EffectiveStreams(int threads) const;
  double ParallelSeconds(std::span<const std::uint64_t> sizes,
                         int threads) const;
};

struct OpCounters {
  std::uint64_t puts = 0;
  std::uint64_t gets = 0;
  std::uint64_t dels = 0;
  std::uint64_t copies = 0;
  std::uint64_t lists = 0;
  // HEAD and user-metadata requests.
  std::uint64_t meta_ops = 0;
  std::uint64_t bytes_uploaded = 0;
  std::uint64_t bytes_downloaded = 0;
  double virtual_elapsed = 0.0;

  std::uint64_t total_ops() const {
    return puts + gets + dels + copies + lists + meta_ops;
  }
  OpCounters operator-(const OpCounters& base) const;
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

struct ListPage {
  std::vector<std::string> names;
  // Resume token for the next page; empty when the listing is complete.
  std::optional<std::string> next_token;
};

struct PutRequest {
  std::string name;
  Bytes data;
};

// The generic object interface: whole-object PUT/GET/DEL plus the common
// extensions (LIST, server-side copy, multipart transfer, user metadata).
// A backend for a real S3-compatible endpoint implements the same surface.
class ObjectStore {
 public:
  virtual ~ObjectStore() = default;

  virtual void CreateBucket(const std::string& bucket) = 0;
  virtual bool BucketExists(const std::string& bucket) const = 0;

  virtual std::string Put(const ObjectKey& key, Bytes data,
                          UserMeta user_meta = {}) = 0;
  virtual ObjectRecord Get(const ObjectKey& key) = 0;
  // Deleting an absent key succeeds.
  virtual void Del(const ObjectKey& key) = 0;
  virtual ListPage List(const std::string& bucket, const std::string& prefix,
                        const std::optional<std::string>& token) = 0;
  virtual std::string Copy(const ObjectKey& src, const ObjectKey& dst) = 0;

  virtual std::string MultipartPut(const ObjectKey& key, Bytes data,
                                   std::uint64_t part_size, int threads,
                                   UserMeta user_meta = {}) = 0;
  virtual DataPtr MultipartGet(const ObjectKey& key, std::uint64_t part_size,
                               int threads) = 0;

  // Independent whole-object transfers issued as one parallel group.
  virtual void PutMany(const std::string& bucket,
                       std::vector<PutRequest> requests, int threads) = 0;
  virtual std::vector<DataPtr> GetMany(const std::string& bucket,
                                       std::span<const std::string> names,
                                       int threads) = 0;

  virtual void SetUserMeta(const ObjectKey& key, UserMeta user_meta) = 0;
  virtual UserMeta GetUserMeta(const ObjectKey& key) = 0;
  virtual ObjectInfo Head(const ObjectKey& key) = 0;

  virtual bool SupportsServerSideCopy() const { return true; }

  virtual OpCounters counters() const = 0;
  virtual void reset_counters() = 0;

  // Drains every page of a listing.
  std::vector<std::string> ListAll(const std::string& bucket,
                                   const std::string& prefix = "");
};

struct StoreConfig {
  std::size_t max_buckets = 100;
  std::size_t page_size = 1000;
  // 0 means unbounded.
  std::uint64_t capacity_bytes = 0;
  // Disabled when empty: counters still tick, the virtual clock does not.
  std::optional<LatencyModel> latency;
};

// Content hash used as the entity tag.
std::string ComputeEtag(ByteView data);

// Strongly consistent in-memory backend with request/byte instrumentation
// and a store-owned virtual clock.
class MemoryObjectStore final : public ObjectStore {
 public:
  explicit MemoryObjectStore(StoreConfig config = {});

  void CreateBucket(const std::string& bucket) override;
  bool BucketExists(const std::string& bucket) const override;

  std::string Put(const ObjectKey& key, Bytes data,
                  UserMeta user_meta = {}) override;
  ObjectRecord Get(const ObjectKey& key) override;
  void Del(const ObjectKey& key) override;
  ListPage List(const std::string& bucket, const std::string& prefix,
                const std::optional<std::string>& token) override;
  std::string Copy(const ObjectKey& src, const ObjectKey& dst) override;

  std::string MultipartPut(const ObjectKey& key, Bytes data,
                           std::uint64_t part_size, int threads,
                           UserMeta user_meta = {}) override;
  DataPtr MultipartGet(const ObjectKey& key, std::uint64_t part_size,
                       int threads) override;

  void PutMany(const std::string& bucket, std::vector<PutRequest> requests,
               int threads) override;
  std::vector<DataPtr> GetMany(const std::string& bucket,
                               std::span<const std::string> names,
                               int threads) override;

  void SetUserMeta(const ObjectKey& key, UserMeta user_meta) override;
  UserMeta GetUserMeta(const ObjectKey& key) override;
  ObjectInfo Head(const ObjectKey& key) override;

  OpCounters counters() const override;
  void reset_counters() override;

  const StoreConfig& config() const { return config_; }
  std::uint64_t stored_bytes() const;

  // Whole-store image for the command-line tools; counters are not saved.
  void SaveImage(const std::string& path) const;
  void LoadImage(const std::string& path);

 private:
  struct Entry {
    DataPtr data;
    UserMeta user_meta;
    std::string etag;
  };
  using Bucket = std::map<std::string, Entry>;

  Bucket& BucketOrThrow(const std::string& bucket);
  const Entry& EntryOrThrow(const ObjectKey& key);
  void CheckName(const ObjectKey& key) const;
  void StoreLocked(const ObjectKey& key, Entry entry);
  void Advance(double seconds);

  StoreConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, Bucket> buckets_;
  std::uint64_t stored_bytes_ = 0;
  OpCounters counters_;
};

}  // namespace objfs

#endif  // OBJFS_OBJECT_STORE_H_
