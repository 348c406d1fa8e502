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

#include "objfs/kv_store.h"

#include <filesystem>
#include <fstream>

#include "objfs/error.h"
#include "objfs/record_io.h"

namespace objfs {
namespace {

constexpr std::string_view kMagic = "OFSM";

bool HasPrefix(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

KvStore::KvStore(std::string path) : path_(std::move(path)) { Load(); }

void KvStore::Load() {
  const std::string snap = path_ + ".snap";
  const std::string wal = path_ + ".wal";
  if (std::filesystem::exists(snap)) {
    const std::string buf = ReadWholeFile(snap);
    RecordReader reader(buf, kMagic);
    Record rec;
    while (reader.Next(&rec)) {
      if (!rec.value) throw Error(Errc::kCorrupt, "tombstone in snapshot");
      data_[rec.key] = std::move(*rec.value);
    }
  }
  if (std::filesystem::exists(wal)) {
    const std::string buf = ReadWholeFile(wal);
    RecordReader reader(buf, kMagic);
    std::vector<Record> pending;
    Record rec;
    // A torn tail (crash mid-append) drops the uncommitted transaction.
    while (reader.Next(&rec, /*strict=*/false)) {
      if (rec.key.empty()) {
        for (Record& r : pending) {
          if (r.value) {
            data_[r.key] = std::move(*r.value);
          } else {
            data_.erase(r.key);
          }
        }
        pending.clear();
      } else {
        pending.push_back(rec);
      }
    }
  } else {
    WriteFileAtomically(wal, EncodeHeader(kMagic));
  }
}

std::optional<std::string> KvStore::Get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return it->second;
}

void KvStore::Put(const std::string& key, std::string value) {
  KvTxn txn;
  txn.Put(key, std::move(value));
  Commit(txn);
}

void KvStore::Del(const std::string& key) {
  KvTxn txn;
  txn.Del(key);
  Commit(txn);
}

std::vector<std::pair<std::string, std::string>> KvStore::Scan(
    const std::string& prefix) const {
  std::lock_guard lock(mu_);
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = data_.lower_bound(prefix); it != data_.end() && HasPrefix(it->first, prefix);
       ++it) {
    out.emplace_back(it->first, it->second);
  }
  return out;
}

std::vector<std::string> KvStore::ScanKeysLocked(const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto it = data_.lower_bound(prefix); it != data_.end() && HasPrefix(it->first, prefix);
       ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::vector<std::string> KvStore::ScanKeys(const std::string& prefix) const {
  std::lock_guard lock(mu_);
  return ScanKeysLocked(prefix);
}

bool KvStore::ExpectationsHoldLocked(const KvTxn& txn) const {
  for (const KvTxn::Expect& e : txn.expects) {
    auto it = data_.find(e.key);
    if (e.value) {
      if (it == data_.end() || it->second != *e.value) return false;
    } else if (it != data_.end()) {
      return false;
    }
  }
  for (const KvTxn::ExpectScan& s : txn.scans) {
    if (ScanKeysLocked(s.prefix) != s.keys) return false;
  }
  return true;
}

void KvStore::Commit(const KvTxn& txn) {
  // The empty key terminates transactions in the WAL.
  for (const auto& w : txn.writes) {
    if (w.key.empty()) throw Error(Errc::kInvalidArgument, "empty key");
  }
  std::lock_guard lock(mu_);
  if (!ExpectationsHoldLocked(txn)) throw Error(Errc::kTxnConflict, "precondition failed");
  std::vector<KvTxn::Write> undo;
  undo.reserve(txn.writes.size());
  try {
    for (std::size_t i = 0; i < txn.writes.size(); ++i) {
      const KvTxn::Write& w = txn.writes[i];
      auto it = data_.find(w.key);
      undo.push_back({w.key, it == data_.end() ? std::nullopt
                                               : std::optional<std::string>(it->second)});
      if (w.value) {
        data_[w.key] = *w.value;
      } else if (it != data_.end()) {
        data_.erase(it);
      }
      if (fault_hook_) fault_hook_(i);
    }
  } catch (...) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      if (it->value) {
        data_[it->key] = *it->value;
      } else {
        data_.erase(it->key);
      }
    }
    throw;
  }
  if (!path_.empty()) AppendWalLocked(txn.writes);
}

void KvStore::AppendWalLocked(const std::vector<KvTxn::Write>& writes) {
  std::string buf;
  for (const KvTxn::Write& w : writes) {
    AppendRecord(&buf, w.key,
                 w.value ? std::optional<std::string_view>(*w.value) : std::nullopt);
  }
  AppendRecord(&buf, "", std::string_view());
  std::ofstream out(path_ + ".wal", std::ios::binary | std::ios::app);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) throw Error(Errc::kIo, "WAL append failed");
}

void KvStore::Checkpoint() {
  if (path_.empty()) return;
  std::lock_guard lock(mu_);
  std::string buf = EncodeHeader(kMagic);
  for (const auto& [k, v] : data_) AppendRecord(&buf, k, v);
  WriteFileAtomically(path_ + ".snap", buf);
  WriteFileAtomically(path_ + ".wal", EncodeHeader(kMagic));
}

std::size_t KvStore::size() const {
  std::lock_guard lock(mu_);
  return data_.size();
}

}  // namespace objfs
