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

#ifndef OBJFS_PATH_H_
#define OBJFS_PATH_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace objfs {

// Splits an absolute path into components, dropping empty and "."
// components. ".." is kept; resolution happens against the namespace.
// Throws InvalidArgument for relative paths.
std::vector<std::string> SplitPath(std::string_view path);

std::string JoinPath(const std::vector<std::string>& components);

// "/a/b/c" -> {"/a/b", "c"}. Throws InvalidArgument for "/".
std::pair<std::string, std::string> SplitParent(std::string_view path);

// Lexical normalization ("/a/./b/../c" -> "/a/c").
std::string NormalizePath(std::string_view path);

// True for names usable as a directory entry.
bool IsValidEntryName(std::string_view name);

}  // namespace objfs

#endif  // OBJFS_PATH_H_
