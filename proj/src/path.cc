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

#include "objfs/path.h"

#include "objfs/error.h"

namespace objfs {

std::vector<std::string> SplitPath(std::string_view path) {
  if (path.empty() || path.front() != '/') {
    throw Error(Errc::kInvalidArgument, "path must be absolute: " + std::string(path));
  }
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    std::string_view comp = path.substr(pos, next - pos);
    if (!comp.empty() && comp != ".") out.emplace_back(comp);
    pos = next + 1;
  }
  return out;
}

std::string JoinPath(const std::vector<std::string>& components) {
  if (components.empty()) return "/";
  std::string out;
  for (const std::string& c : components) {
    out += '/';
    out += c;
  }
  return out;
}

std::pair<std::string, std::string> SplitParent(std::string_view path) {
  std::vector<std::string> comps = SplitPath(path);
  if (comps.empty()) throw Error(Errc::kInvalidArgument, "path has no final component");
  std::string name = std::move(comps.back());
  comps.pop_back();
  return {JoinPath(comps), std::move(name)};
}

std::string NormalizePath(std::string_view path) {
  std::vector<std::string> out;
  for (std::string& c : SplitPath(path)) {
    if (c == "..") {
      if (!out.empty()) out.pop_back();
    } else {
      out.push_back(std::move(c));
    }
  }
  return JoinPath(out);
}

bool IsValidEntryName(std::string_view name) {
  return !name.empty() && name != "." && name != ".." &&
         name.find('/') == std::string_view::npos &&
         name.find('\0') == std::string_view::npos;
}

}  // namespace objfs
