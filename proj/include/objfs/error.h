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

#ifndef OBJFS_ERROR_H_
#define OBJFS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace objfs {

// Every failure surfaced by the library carries one of these codes. Each
// maps onto a POSIX errno so that a kernel adapter can forward it as-is.
enum class Errc {
  kNotFound,
  kExists,
  kNotADirectory,
  kIsADirectory,
  kNotEmpty,
  kUnsupported,
  kInvalidArgument,
  kSymlinkLoop,
  kBadHandle,
  kReadOnlyHandle,
  kTooManyOpenFiles,
  kBusy,
  // Object store.
  kNoSuchKey,
  kUnknownBucket,
  kTooManyBuckets,
  kStoreFull,
  // Metadata service.
  kTxnConflict,
  kAlreadyFormatted,
  kNotFormatted,
  kCorrupt,
  // Naming / mapping.
  kNameConflict,
  kHookFailure,
  kBadChunkIndex,
  // Cache.
  kCacheExhausted,
  kIo,
};

std::string_view ErrcName(Errc code);

// POSIX errno equivalent (ENOENT, EEXIST, ...).
int PosixCode(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  int posix_code() const noexcept { return PosixCode(code_); }

 private:
  Errc code_;
};

}  // namespace objfs

#endif  // OBJFS_ERROR_H_
