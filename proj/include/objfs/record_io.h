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

#ifndef OBJFS_RECORD_IO_H_
#define OBJFS_RECORD_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace objfs {

// Length-prefixed binary records: u32le key_len, key, u32le val_len, val.
// A val_len of 0xFFFFFFFF marks a deletion (no value bytes follow).
// Files start with a 4-byte magic and a version byte.
constexpr std::uint32_t kTombstoneLength = 0xFFFFFFFFu;
constexpr std::uint8_t kRecordFormatVersion = 1;

struct Record {
  std::string key;
  std::optional<std::string> value;  // nullopt = tombstone
};

std::string EncodeHeader(std::string_view magic);
void AppendRecord(std::string* out, std::string_view key,
                  std::optional<std::string_view> value);

class RecordReader {
 public:
  // Throws Corrupt when the header does not match.
  RecordReader(std::string_view buffer, std::string_view magic);

  // Returns false at end of input. A truncated trailing record either
  // throws Corrupt (strict) or is treated as end of input.
  bool Next(Record* record, bool strict = true);

 private:
  std::string_view buffer_;
  std::size_t pos_ = 0;
};

std::string ReadWholeFile(const std::string& path);
// Writes via a temporary file and rename.
void WriteFileAtomically(const std::string& path, std::string_view contents);

}  // namespace objfs

#endif  // OBJFS_RECORD_IO_H_
