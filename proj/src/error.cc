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

#include "objfs/error.h"

#include <cerrno>

namespace objfs {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kNotFound: return "NotFound";
    case Errc::kExists: return "Exists";
    case Errc::kNotADirectory: return "NotADirectory";
    case Errc::kIsADirectory: return "IsADirectory";
    case Errc::kNotEmpty: return "NotEmpty";
    case Errc::kUnsupported: return "Unsupported";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kSymlinkLoop: return "SymlinkLoop";
    case Errc::kBadHandle: return "BadHandle";
    case Errc::kReadOnlyHandle: return "ReadOnlyHandle";
    case Errc::kTooManyOpenFiles: return "TooManyOpenFiles";
    case Errc::kBusy: return "Busy";
    case Errc::kNoSuchKey: return "NoSuchKey";
    case Errc::kUnknownBucket: return "UnknownBucket";
    case Errc::kTooManyBuckets: return "TooManyBuckets";
    case Errc::kStoreFull: return "StoreFull";
    case Errc::kTxnConflict: return "TxnConflict";
    case Errc::kAlreadyFormatted: return "AlreadyFormatted";
    case Errc::kNotFormatted: return "NotFormatted";
    case Errc::kCorrupt: return "Corrupt";
    case Errc::kNameConflict: return "NameConflict";
    case Errc::kHookFailure: return "HookFailure";
    case Errc::kBadChunkIndex: return "BadChunkIndex";
    case Errc::kCacheExhausted: return "CacheExhausted";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

int PosixCode(Errc code) {
  switch (code) {
    case Errc::kNotFound:
    case Errc::kNoSuchKey:
    case Errc::kUnknownBucket:
      return ENOENT;
    case Errc::kExists:
    case Errc::kAlreadyFormatted:
    case Errc::kNameConflict:
      return EEXIST;
    case Errc::kNotADirectory: return ENOTDIR;
    case Errc::kIsADirectory: return EISDIR;
    case Errc::kNotEmpty: return ENOTEMPTY;
    case Errc::kUnsupported: return EOPNOTSUPP;
    case Errc::kInvalidArgument:
    case Errc::kBadChunkIndex:
      return EINVAL;
    case Errc::kSymlinkLoop: return ELOOP;
    case Errc::kBadHandle:
    case Errc::kReadOnlyHandle:
      return EBADF;
    case Errc::kTooManyOpenFiles: return EMFILE;
    case Errc::kBusy: return EBUSY;
    case Errc::kTooManyBuckets:
    case Errc::kStoreFull:
    case Errc::kCacheExhausted:
      return ENOSPC;
    case Errc::kTxnConflict: return EAGAIN;
    case Errc::kNotFormatted:
    case Errc::kCorrupt:
    case Errc::kHookFailure:
    case Errc::kIo:
      return EIO;
  }
  return EIO;
}

}  // namespace objfs
