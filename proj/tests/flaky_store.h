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

#ifndef OBJFS_TESTS_FLAKY_STORE_H_
#define OBJFS_TESTS_FLAKY_STORE_H_

#include <atomic>
#include <memory>
#include <string>

#include "objfs/error.h"
#include "objfs/object_store.h"

namespace objfs::testing {

// Delegating store that fails mutating requests on demand: after
// `fail_after` further successful mutations, every mutation throws kIo.
class FlakyStore : public ObjectStore {
 public:
  explicit FlakyStore(std::shared_ptr<ObjectStore> inner) : inner_(std::move(inner)) {}

  void FailAfter(long n) {
    budget_ = n;
    once_ = false;
  }
  // A single transient failure: the mutation after `n` more fails, then
  // the store heals by itself.
  void FailOnceAfter(long n) {
    budget_ = n;
    once_ = true;
  }
  void Heal() { budget_ = -1; }
  void set_server_side_copy(bool on) { ssc_ = on; }

  void CreateBucket(const std::string& b) override { inner_->CreateBucket(b); }
  bool BucketExists(const std::string& b) const override { return inner_->BucketExists(b); }
  std::string Put(const ObjectKey& k, Bytes d, UserMeta m) override {
    Spend();
    return inner_->Put(k, std::move(d), std::move(m));
  }
  ObjectRecord Get(const ObjectKey& k) override { return inner_->Get(k); }
  void Del(const ObjectKey& k) override {
    Spend();
    inner_->Del(k);
  }
  ListPage List(const std::string& b, const std::string& p,
                const std::optional<std::string>& t) override {
    return inner_->List(b, p, t);
  }
  std::string Copy(const ObjectKey& s, const ObjectKey& d) override {
    if (!ssc_) throw Error(Errc::kUnsupported, "copy disabled");
    Spend();
    return inner_->Copy(s, d);
  }
  std::string MultipartPut(const ObjectKey& k, Bytes d, std::uint64_t part, int threads,
                           UserMeta m) override {
    Spend();
    return inner_->MultipartPut(k, std::move(d), part, threads, std::move(m));
  }
  DataPtr MultipartGet(const ObjectKey& k, std::uint64_t part, int threads) override {
    return inner_->MultipartGet(k, part, threads);
  }
  void PutMany(const std::string& b, std::vector<PutRequest> r, int threads) override {
    Spend();
    inner_->PutMany(b, std::move(r), threads);
  }
  std::vector<DataPtr> GetMany(const std::string& b, std::span<const std::string> n,
                               int threads) override {
    return inner_->GetMany(b, n, threads);
  }
  void SetUserMeta(const ObjectKey& k, UserMeta m) override {
    Spend();
    inner_->SetUserMeta(k, std::move(m));
  }
  UserMeta GetUserMeta(const ObjectKey& k) override { return inner_->GetUserMeta(k); }
  ObjectInfo Head(const ObjectKey& k) override { return inner_->Head(k); }
  bool SupportsServerSideCopy() const override { return ssc_; }
  OpCounters counters() const override { return inner_->counters(); }
  void reset_counters() override { inner_->reset_counters(); }

 private:
  void Spend() {
    long b = budget_.load();
    if (b < 0) return;
    if (b == 0) {
      if (once_) budget_ = -1;
      throw Error(Errc::kIo, "injected store failure");
    }
    budget_ = b - 1;
  }

  std::shared_ptr<ObjectStore> inner_;
  std::atomic<long> budget_{-1};
  std::atomic<bool> once_{false};
  bool ssc_ = true;
};

}  // namespace objfs::testing

#endif  // OBJFS_TESTS_FLAKY_STORE_H_
