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

#ifndef OBJFS_KV_STORE_H_
#define OBJFS_KV_STORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace objfs {

// One conditional write set. Every precondition is checked and every write
// applied under a single lock, so a commit is atomic and serializable.
struct KvTxn {
  struct Expect {
    std::string key;
    std::optional<std::string> value;  // nullopt = key must be absent
  };
  struct ExpectScan {
    std::string prefix;
    std::vector<std::string> keys;  // exact key set under prefix
  };
  struct Write {
    std::string key;
    std::optional<std::string> value;  // nullopt = delete
  };

  std::vector<Expect> expects;
  std::vector<ExpectScan> scans;
  std::vector<Write> writes;

  void Put(std::string key, std::string value) {
    writes.push_back({std::move(key), std::move(value)});
  }
  void Del(std::string key) { writes.push_back({std::move(key), std::nullopt}); }
};

// In-process ordered key-value store backing the metadata service. With a
// path it persists as "<path>.snap" (whole-store snapshot) plus
// "<path>.wal" (committed transactions, each terminated by an empty-key
// commit record).
class KvStore {
 public:
  KvStore() = default;
  explicit KvStore(std::string path);

  KvStore(const KvStore&) = delete;
  KvStore& operator=(const KvStore&) = delete;

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, std::string value);
  void Del(const std::string& key);
  std::vector<std::pair<std::string, std::string>> Scan(const std::string& prefix) const;
  std::vector<std::string> ScanKeys(const std::string& prefix) const;

  // Throws TxnConflict if a precondition fails; nothing is applied then.
  void Commit(const KvTxn& txn);

  // Writes a snapshot and truncates the WAL. No-op without a path.
  void Checkpoint();

  std::size_t size() const;

  // Test hook: invoked after each write of a transaction is applied. If it
  // throws, the transaction is rolled back and the exception propagates.
  void set_fault_hook(std::function<void(std::size_t write_index)> hook) {
    std::lock_guard lock(mu_);
    fault_hook_ = std::move(hook);
  }

 private:
  void Load();
  void AppendWalLocked(const std::vector<KvTxn::Write>& writes);
  bool ExpectationsHoldLocked(const KvTxn& txn) const;
  std::vector<std::string> ScanKeysLocked(const std::string& prefix) const;

  mutable std::mutex mu_;
  std::map<std::string, std::string> data_;
  std::string path_;
  std::function<void(std::size_t)> fault_hook_;
};

}  // namespace objfs

#endif  // OBJFS_KV_STORE_H_
