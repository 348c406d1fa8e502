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

#include "objfs/record_io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "objfs/error.h"

namespace objfs {
namespace {

void PutU32(std::string* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[pos + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string EncodeHeader(std::string_view magic) {
  std::string out(magic);
  out.push_back(static_cast<char>(kRecordFormatVersion));
  return out;
}

void AppendRecord(std::string* out, std::string_view key,
                  std::optional<std::string_view> value) {
  PutU32(out, static_cast<std::uint32_t>(key.size()));
  out->append(key);
  if (!value) {
    PutU32(out, kTombstoneLength);
    return;
  }
  PutU32(out, static_cast<std::uint32_t>(value->size()));
  out->append(*value);
}

RecordReader::RecordReader(std::string_view buffer, std::string_view magic)
    : buffer_(buffer) {
  if (buffer.size() < magic.size() + 1 || buffer.substr(0, magic.size()) != magic) {
    throw Error(Errc::kCorrupt, "bad magic, expected " + std::string(magic));
  }
  if (static_cast<std::uint8_t>(buffer[magic.size()]) != kRecordFormatVersion) {
    throw Error(Errc::kCorrupt, "unsupported record format version");
  }
  pos_ = magic.size() + 1;
}

bool RecordReader::Next(Record* record, bool strict) {
  if (pos_ == buffer_.size()) return false;
  auto truncated = [&]() {
    if (strict) throw Error(Errc::kCorrupt, "truncated record");
    pos_ = buffer_.size();
    return false;
  };
  if (buffer_.size() - pos_ < 4) return truncated();
  std::uint32_t key_len = GetU32(buffer_, pos_);
  if (buffer_.size() - pos_ - 4 < static_cast<std::size_t>(key_len) + 4) return truncated();
  std::size_t p = pos_ + 4;
  record->key.assign(buffer_.substr(p, key_len));
  p += key_len;
  std::uint32_t val_len = GetU32(buffer_, p);
  p += 4;
  if (val_len == kTombstoneLength) {
    record->value.reset();
  } else {
    if (buffer_.size() - p < val_len) return truncated();
    record->value.emplace(buffer_.substr(p, val_len));
    p += val_len;
  }
  pos_ = p;
  return true;
}

std::string ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kNotFound, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomically(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIo, "cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::kIo, "short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace objfs
