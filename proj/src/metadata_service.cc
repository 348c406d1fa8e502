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

#include "objfs/metadata_service.h"

#include <chrono>
#include <cstdio>
#include <deque>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "objfs/path.h"

namespace objfs {
namespace {

constexpr char kNextInoKey[] = "s/next_ino";
constexpr char kFormattedKey[] = "s/formatted";

std::string Hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t ParseHex(std::string_view s) {
  if (s.empty() || s.size() > 16) throw Error(Errc::kCorrupt, "bad hex value");
  std::uint64_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') {
      v |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      throw Error(Errc::kCorrupt, "bad hex value");
    }
  }
  return v;
}

const char* KindName(InodeKind k) {
  switch (k) {
    case InodeKind::kFile: return "file";
    case InodeKind::kDir: return "dir";
    case InodeKind::kSymlink: return "symlink";
  }
  return "?";
}

InodeKind KindFromName(const std::string& s) {
  if (s == "file") return InodeKind::kFile;
  if (s == "dir") return InodeKind::kDir;
  if (s == "symlink") return InodeKind::kSymlink;
  throw Error(Errc::kCorrupt, "bad inode kind " + s);
}

}  // namespace

std::int64_t SystemClockNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string InodeKey(InodeNumber ino) { return "i/" + Hex16(ino.value); }
std::string EntryPrefix(InodeNumber parent) { return "d/" + Hex16(parent.value) + "/"; }
std::string EntryKey(InodeNumber parent, std::string_view name) {
  return EntryPrefix(parent) + std::string(name);
}
std::string BaseKey(std::string_view base) { return "b/" + std::string(base); }

std::string EncodeInode(const InodeRecord& r) {
  nlohmann::json j = {
      {"ino", r.ino.value},
      {"kind", KindName(r.kind)},
      {"mode", r.mode},
      {"uid", r.uid},
      {"gid", r.gid},
      {"size", r.size},
      {"nlink", r.nlink},
      {"atime", r.atime_ns},
      {"mtime", r.mtime_ns},
      {"ctime", r.ctime_ns},
  };
  if (r.kind == InodeKind::kFile) {
    j["scheme"] = r.mapping.scheme == MappingScheme::kOneToOne ? "1to1" : "1toN";
    j["chunk"] = r.mapping.chunk_size;
    j["base"] = r.object_base;
  } else if (r.kind == InodeKind::kSymlink) {
    j["target"] = r.symlink_target;
  } else {
    j["parent"] = r.parent.value;
  }
  return j.dump();
}

InodeRecord DecodeInode(std::string_view bytes) {
  InodeRecord r;
  try {
    const nlohmann::json j = nlohmann::json::parse(bytes);
    r.ino = InodeNumber{j.at("ino").get<std::uint64_t>()};
    r.kind = KindFromName(j.at("kind").get<std::string>());
    r.mode = j.at("mode").get<std::uint32_t>();
    r.uid = j.at("uid").get<std::uint32_t>();
    r.gid = j.at("gid").get<std::uint32_t>();
    r.size = j.at("size").get<std::uint64_t>();
    r.nlink = j.at("nlink").get<std::uint32_t>();
    r.atime_ns = j.at("atime").get<std::int64_t>();
    r.mtime_ns = j.at("mtime").get<std::int64_t>();
    r.ctime_ns = j.at("ctime").get<std::int64_t>();
    if (r.kind == InodeKind::kFile) {
      r.mapping.scheme = j.at("scheme").get<std::string>() == "1to1" ? MappingScheme::kOneToOne
                                                                     : MappingScheme::kOneToN;
      r.mapping.chunk_size = j.at("chunk").get<std::uint64_t>();
      r.object_base = j.at("base").get<std::string>();
    } else if (r.kind == InodeKind::kSymlink) {
      r.symlink_target = j.at("target").get<std::string>();
    } else {
      r.parent = InodeNumber{j.at("parent").get<std::uint64_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kCorrupt, std::string("inode record: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------- MetaTxn

std::optional<std::string> MetaTxn::Read(const std::string& key) {
  if (auto it = pending_.find(key); it != pending_.end()) return it->second;
  if (auto it = observed_.find(key); it != observed_.end()) return it->second;
  std::optional<std::string> v = kv_->Get(key);
  observed_.emplace(key, v);
  return v;
}

void MetaTxn::Write(const std::string& key, std::optional<std::string> value) {
  pending_[key] = std::move(value);
}

std::optional<std::string> MetaTxn::GetRaw(const std::string& key) { return Read(key); }
void MetaTxn::PutRaw(const std::string& key, std::string value) { Write(key, std::move(value)); }

std::optional<InodeRecord> MetaTxn::FindInode(InodeNumber ino) {
  std::optional<std::string> v = Read(InodeKey(ino));
  if (!v) return std::nullopt;
  return DecodeInode(*v);
}

InodeRecord MetaTxn::GetInode(InodeNumber ino) {
  std::optional<InodeRecord> r = FindInode(ino);
  if (!r) throw Error(Errc::kNotFound, "inode " + Hex16(ino.value));
  return *r;
}

std::optional<InodeNumber> MetaTxn::FindEntry(InodeNumber parent, std::string_view name) {
  std::optional<std::string> v = Read(EntryKey(parent, name));
  if (!v) return std::nullopt;
  return InodeNumber{ParseHex(*v)};
}

std::vector<std::pair<std::string, InodeNumber>> MetaTxn::ListEntries(InodeNumber dir) {
  const std::string prefix = EntryPrefix(dir);
  std::map<std::string, std::string> merged;
  KvTxn::ExpectScan scan{prefix, {}};
  for (auto& [k, v] : kv_->Scan(prefix)) {
    scan.keys.push_back(k);
    observed_.emplace(k, v);
    merged[k] = v;
  }
  scans_.push_back(std::move(scan));
  for (auto it = pending_.lower_bound(prefix);
       it != pending_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    if (it->second) {
      merged[it->first] = *it->second;
    } else {
      merged.erase(it->first);
    }
  }
  std::vector<std::pair<std::string, InodeNumber>> out;
  for (auto& [k, v] : merged) out.emplace_back(k.substr(prefix.size()), InodeNumber{ParseHex(v)});
  return out;
}

std::optional<InodeNumber> MetaTxn::BaseOwner(std::string_view base) {
  std::optional<std::string> v = Read(BaseKey(base));
  if (!v) return std::nullopt;
  return InodeNumber{ParseHex(*v)};
}

void MetaTxn::PutInode(const InodeRecord& rec) { Write(InodeKey(rec.ino), EncodeInode(rec)); }
void MetaTxn::DelInode(InodeNumber ino) { Write(InodeKey(ino), std::nullopt); }

void MetaTxn::PutEntry(InodeNumber parent, std::string_view name, InodeNumber child) {
  Write(EntryKey(parent, name), Hex16(child.value));
}

void MetaTxn::DelEntry(InodeNumber parent, std::string_view name) {
  Write(EntryKey(parent, name), std::nullopt);
}

void MetaTxn::ClaimBase(std::string_view base, InodeNumber owner) {
  if (std::optional<InodeNumber> cur = BaseOwner(base); cur && *cur != owner) {
    throw Error(Errc::kNameConflict, "object name already in use: " + std::string(base));
  }
  Write(BaseKey(base), Hex16(owner.value));
}

void MetaTxn::ReleaseBase(std::string_view base) { Write(BaseKey(base), std::nullopt); }

void MetaTxn::Commit() {
  if (pending_.empty()) return;
  KvTxn txn;
  for (auto& [k, v] : observed_) txn.expects.push_back({k, v});
  txn.scans = scans_;
  for (auto& [k, v] : pending_) txn.writes.push_back({k, v});
  kv_->Commit(txn);
}

// -------------------------------------------------------- MetadataService

MetadataService::MetadataService(std::shared_ptr<KvStore> kv, Clock clock)
    : kv_(std::move(kv)), clock_(clock ? std::move(clock) : Clock(SystemClockNs)) {}

void MetadataService::TouchCtime(InodeRecord* rec, const std::optional<InodeRecord>& prev) const {
  const std::int64_t now = clock_();
  rec->ctime_ns = prev ? std::max(now, prev->ctime_ns) : now;
}

void MetadataService::Format(std::uint32_t uid, std::uint32_t gid, std::string marker) {
  Transact([&](MetaTxn& t) {
    if (t.GetRaw(kFormattedKey)) throw Error(Errc::kAlreadyFormatted, "metadata already formatted");
    InodeRecord root;
    root.ino = kRootIno;
    root.kind = InodeKind::kDir;
    root.mode = 0755;
    root.uid = uid;
    root.gid = gid;
    root.nlink = 2;
    root.parent = kRootIno;
    root.atime_ns = root.mtime_ns = root.ctime_ns = clock_();
    t.PutInode(root);
    t.PutRaw(kNextInoKey, Hex16(2));
    t.PutRaw(kFormattedKey, marker);
  });
}

bool MetadataService::IsFormatted() const { return kv_->Get(kFormattedKey).has_value(); }

std::optional<std::string> MetadataService::FormatMarker() const { return kv_->Get(kFormattedKey); }

InodeNumber MetadataService::AllocIno() {
  return Transact([&](MetaTxn& t) {
    std::optional<std::string> cur = t.GetRaw(kNextInoKey);
    if (!cur) throw Error(Errc::kNotFormatted, "no inode allocator");
    const std::uint64_t v = ParseHex(*cur);
    t.PutRaw(kNextInoKey, Hex16(v + 1));
    return InodeNumber{v};
  });
}

InodeRecord MetadataService::GetInode(InodeNumber ino) const {
  std::optional<std::string> v = kv_->Get(InodeKey(ino));
  if (!v) throw Error(Errc::kNotFound, "inode " + Hex16(ino.value));
  return DecodeInode(*v);
}

void MetadataService::PutInode(InodeNumber ino, const InodeRecord& rec) {
  if (rec.ino != ino) throw Error(Errc::kInvalidArgument, "record inode number mismatch");
  Transact([&](MetaTxn& t) {
    std::optional<InodeRecord> prev = t.FindInode(ino);
    if (!prev) throw Error(Errc::kNotFound, "inode " + Hex16(ino.value));
    InodeRecord next = rec;
    TouchCtime(&next, prev);
    t.PutInode(next);
  });
}

std::optional<InodeNumber> MetadataService::FindEntry(InodeNumber parent,
                                                      std::string_view name) const {
  std::optional<std::string> v = kv_->Get(EntryKey(parent, name));
  if (!v) return std::nullopt;
  return InodeNumber{ParseHex(*v)};
}

InodeNumber MetadataService::Lookup(std::string_view path, bool follow_final) const {
  std::deque<std::string> pending;
  for (std::string& c : SplitPath(path)) pending.push_back(std::move(c));
  InodeNumber cur = kRootIno;
  int expansions = 0;
  while (!pending.empty()) {
    const std::string comp = std::move(pending.front());
    pending.pop_front();
    const InodeRecord dir = GetInode(cur);
    if (dir.kind != InodeKind::kDir) {
      throw Error(Errc::kNotADirectory, std::string(path));
    }
    if (comp == "..") {
      cur = dir.parent;
      continue;
    }
    std::optional<InodeNumber> child = FindEntry(cur, comp);
    if (!child) throw Error(Errc::kNotFound, std::string(path));
    const InodeRecord rec = GetInode(*child);
    const bool is_final = pending.empty();
    if (rec.kind == InodeKind::kSymlink && (!is_final || follow_final)) {
      if (++expansions > kMaxSymlinkDepth) throw Error(Errc::kSymlinkLoop, std::string(path));
      const std::string& target = rec.symlink_target;
      std::vector<std::string> tcomps =
          SplitPath(!target.empty() && target.front() == '/' ? target : "/" + target);
      pending.insert(pending.begin(), tcomps.begin(), tcomps.end());
      if (!target.empty() && target.front() == '/') cur = kRootIno;
      continue;
    }
    cur = *child;
  }
  return cur;
}

std::vector<std::pair<std::string, InodeNumber>> MetadataService::ReaddirEntries(
    InodeNumber dir) const {
  const InodeRecord rec = GetInode(dir);
  if (rec.kind != InodeKind::kDir) throw Error(Errc::kNotADirectory, "readdir on non-directory");
  const std::string prefix = EntryPrefix(dir);
  std::vector<std::pair<std::string, InodeNumber>> out;
  for (auto& [k, v] : kv_->Scan(prefix)) {
    out.emplace_back(k.substr(prefix.size()), InodeNumber{ParseHex(v)});
  }
  return out;
}

std::vector<std::string> MetadataService::Readdir(InodeNumber dir) const {
  std::vector<std::string> names;
  for (auto& [name, ino] : ReaddirEntries(dir)) names.push_back(name);
  return names;
}

void MetadataService::LinkEntry(InodeNumber parent, std::string_view name, InodeNumber child) {
  if (!IsValidEntryName(name)) throw Error(Errc::kInvalidArgument, "bad entry name");
  Transact([&](MetaTxn& t) {
    InodeRecord p = t.GetInode(parent);
    if (p.kind != InodeKind::kDir) throw Error(Errc::kNotADirectory, "link parent");
    if (t.FindEntry(parent, name)) throw Error(Errc::kExists, std::string(name));
    InodeRecord c = t.GetInode(child);
    if (c.kind == InodeKind::kDir) throw Error(Errc::kUnsupported, "hard link to directory");
    const InodeRecord prev_c = c;
    c.nlink += 1;
    TouchCtime(&c, prev_c);
    const InodeRecord prev_p = p;
    p.mtime_ns = clock_();
    TouchCtime(&p, prev_p);
    t.PutInode(c);
    t.PutInode(p);
    t.PutEntry(parent, name, child);
  });
}

InodeRecord MetadataService::UnlinkEntry(InodeNumber parent, std::string_view name) {
  return Transact([&](MetaTxn& t) {
    InodeRecord p = t.GetInode(parent);
    if (p.kind != InodeKind::kDir) throw Error(Errc::kNotADirectory, "unlink parent");
    std::optional<InodeNumber> child = t.FindEntry(parent, name);
    if (!child) throw Error(Errc::kNotFound, std::string(name));
    InodeRecord c = t.GetInode(*child);
    const InodeRecord prev_p = p;
    if (c.kind == InodeKind::kDir) {
      if (!t.ListEntries(*child).empty()) throw Error(Errc::kNotEmpty, std::string(name));
      p.nlink -= 1;
      c.nlink = 0;
      t.DelInode(*child);
    } else {
      const InodeRecord prev_c = c;
      c.nlink -= 1;
      TouchCtime(&c, prev_c);
      t.PutInode(c);
    }
    p.mtime_ns = clock_();
    TouchCtime(&p, prev_p);
    t.PutInode(p);
    t.DelEntry(parent, name);
    return c;
  });
}

InodeRecord MetadataService::CreateNode(
    InodeNumber parent, std::string_view name, InodeRecord tmpl,
    const std::function<std::optional<std::string>(InodeNumber)>& base_for) {
  if (!IsValidEntryName(name)) throw Error(Errc::kInvalidArgument, "bad entry name");
  // Allocated outside the namespace transaction so that retries do not
  // contend on the allocator; a failed create leaves a gap, never a reuse.
  const InodeNumber ino = AllocIno();
  std::optional<std::string> base;
  if (base_for) base = base_for(ino);
  return Transact([&](MetaTxn& t) {
    InodeRecord p = t.GetInode(parent);
    if (p.kind != InodeKind::kDir) throw Error(Errc::kNotADirectory, "create parent");
    if (t.FindEntry(parent, name)) throw Error(Errc::kExists, std::string(name));
    InodeRecord rec = tmpl;
    rec.ino = ino;
    const std::int64_t now = clock_();
    rec.atime_ns = rec.mtime_ns = rec.ctime_ns = now;
    const InodeRecord prev_p = p;
    if (rec.kind == InodeKind::kDir) {
      rec.nlink = 2;
      rec.parent = parent;
      p.nlink += 1;
    } else {
      rec.nlink = 1;
    }
    if (base) {
      rec.object_base = *base;
      t.ClaimBase(*base, ino);
    }
    p.mtime_ns = now;
    TouchCtime(&p, prev_p);
    t.PutInode(rec);
    t.PutInode(p);
    t.PutEntry(parent, name, ino);
    return rec;
  });
}

std::optional<InodeNumber> MetadataService::BaseOwner(std::string_view base) const {
  std::optional<std::string> v = kv_->Get(BaseKey(base));
  if (!v) return std::nullopt;
  return InodeNumber{ParseHex(*v)};
}

std::vector<InodeRecord> MetadataService::AllInodes() const {
  std::vector<InodeRecord> out;
  for (auto& [k, v] : kv_->Scan("i/")) out.push_back(DecodeInode(v));
  return out;
}

std::vector<std::string> MetadataService::Audit(const std::vector<InodeNumber>& orphans) const {
  std::vector<std::string> problems;
  std::unordered_map<InodeNumber, InodeRecord> inodes;
  for (InodeRecord& r : AllInodes()) inodes.emplace(r.ino, std::move(r));
  std::unordered_map<InodeNumber, std::uint32_t> refs;
  std::unordered_map<InodeNumber, std::uint32_t> child_dirs;
  std::unordered_map<InodeNumber, InodeNumber> dir_parent;
  for (auto& [k, v] : kv_->Scan("d/")) {
    const InodeNumber parent{ParseHex(std::string_view(k).substr(2, 16))};
    const InodeNumber child{ParseHex(v)};
    if (!inodes.count(parent)) problems.push_back("entry under missing parent: " + k);
    auto it = inodes.find(child);
    if (it == inodes.end()) {
      problems.push_back("dangling entry: " + k);
      continue;
    }
    refs[child] += 1;
    if (it->second.kind == InodeKind::kDir) {
      child_dirs[parent] += 1;
      dir_parent[child] = parent;
      if (it->second.parent != parent) problems.push_back("directory parent mismatch: " + k);
    }
  }
  const std::set<InodeNumber> orphan_set(orphans.begin(), orphans.end());
  for (const auto& [ino, r] : inodes) {
    const std::string id = Hex16(ino.value);
    if (r.kind == InodeKind::kDir) {
      if (r.nlink != 2 + child_dirs[ino]) problems.push_back("dir nlink mismatch: " + id);
      if (ino != kRootIno && refs[ino] != 1) problems.push_back("dir entry count != 1: " + id);
      // Parent chain must reach the root without revisiting a node.
      std::set<InodeNumber> seen;
      InodeNumber cur = ino;
      while (cur != kRootIno) {
        if (!seen.insert(cur).second) {
          problems.push_back("directory cycle at " + id);
          break;
        }
        auto pit = dir_parent.find(cur);
        if (pit == dir_parent.end()) {
          problems.push_back("unreachable directory " + id);
          break;
        }
        cur = pit->second;
      }
    } else if (r.nlink != refs[ino]) {
      problems.push_back("nlink mismatch: " + id);
    } else if (r.nlink == 0 && !orphan_set.count(ino)) {
      problems.push_back("unreferenced inode: " + id);
    }
  }
  if (!inodes.count(kRootIno)) problems.push_back("missing root");
  return problems;
}

}  // namespace objfs
