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

// Command-line front end: benchmarks plus a few shell-style utilities over
// a file system whose state lives in a local directory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "objfs/bench.h"
#include "objfs/config.h"
#include "objfs/error.h"
#include "objfs/filesystem.h"
#include "objfs/kv_store.h"
#include "objfs/metadata_service.h"
#include "objfs/record_io.h"

namespace {

namespace stdfs = std::filesystem;
using namespace objfs;

struct State {
  stdfs::path dir;
  ObjfsConfig config;
  std::shared_ptr<MemoryObjectStore> store;
  std::shared_ptr<KvStore> kv;
  std::shared_ptr<MetadataService> meta;
  std::unique_ptr<Filesystem> fs;

  std::string ImagePath() const { return (dir / "store.img").string(); }

  void Save() {
    fs.reset();  // flushes nothing: every command closes its handles
    store->SaveImage(ImagePath());
    kv->Checkpoint();
  }
};

std::string ConfigText(const std::string& config_path, const stdfs::path& dir) {
  if (!config_path.empty()) return ReadWholeFile(config_path);
  const stdfs::path saved = dir / "config";
  if (stdfs::exists(saved)) return ReadWholeFile(saved.string());
  return "";
}

State OpenState(const std::string& dir, const std::string& config_path, bool format) {
  State st;
  st.dir = dir;
  const std::string text = ConfigText(config_path, st.dir);
  st.config = ParseConfig(text);
  if (st.config.store_kind != "memory") {
    throw Error(Errc::kUnsupported, "only store.kind = memory is built in");
  }
  if (format) {
    stdfs::create_directories(st.dir);
    WriteFileAtomically((st.dir / "config").string(), text);
  } else if (!stdfs::exists(st.dir / "config")) {
    throw Error(Errc::kNotFormatted, "no file system in " + dir + " (run mkfs)");
  }
  st.store = std::make_shared<MemoryObjectStore>(st.config.store);
  if (stdfs::exists(st.ImagePath())) st.store->LoadImage(st.ImagePath());
  st.kv = std::make_shared<KvStore>((st.dir / "meta").string());
  st.meta = std::make_shared<MetadataService>(st.kv);
  st.fs = format ? Filesystem::Mkfs(st.store, st.meta, st.config.fs)
                 : Filesystem::Mount(st.store, st.meta, st.config.fs);
  return st;
}

bool IsFsPath(const std::string& s) { return s.rfind("fs:", 0) == 0; }
std::string FsPart(const std::string& s) { return s.substr(3); }

std::string KindChar(InodeKind k) {
  switch (k) {
    case InodeKind::kDir: return "d";
    case InodeKind::kSymlink: return "l";
    case InodeKind::kFile: return "-";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"objfs: a file system over an object store"};
  app.require_subcommand(1);
  std::string state_dir = ".objfs";
  std::string config_path;
  app.add_option("--state", state_dir, "Directory holding the store image and metadata");
  app.add_option("--config", config_path, "Config file (flat key = value)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run one benchmark workload");
  std::string workload = "stream_write";
  std::uint64_t file_mib = 64, record_mib = 4, chunk_mib = 4, op_count = 16, dir_files = 0;
  std::string mapping = "1to1", naming = "inode", cache = "writeback", csv_path;
  int threads = 8;
  std::uint64_t seed = 1;
  bench->add_option("--workload", workload,
                    "stream_read|stream_write|random_write|rename_file|rename_dir");
  bench->add_option("--file-mib", file_mib, "File size in MiB (per file for rename_dir)");
  bench->add_option("--record-mib", record_mib, "Record size in MiB");
  bench->add_option("--mapping", mapping, "1to1|1toN");
  bench->add_option("--chunk-mib", chunk_mib, "Chunk size in MiB for 1toN");
  bench->add_option("--naming", naming, "inode|filepath|filename");
  bench->add_option("--cache", cache, "none|writeback");
  bench->add_option("--threads", threads, "Multipart transfer threads");
  bench->add_option("--seed", seed, "RNG seed");
  bench->add_option("--ops", op_count, "Writes issued by random_write");
  bench->add_option("--dir-files", dir_files, "Files moved by rename_dir");
  bench->add_option("--csv", csv_path, "Append the CSV row here (header added if new)");

  auto* sweep = app.add_subcommand("sweep", "Run a grid of workloads, print CSV");
  std::string grid_path, sweep_out;
  sweep->add_option("--grid", grid_path, "Grid file")->required();
  sweep->add_option("--out", sweep_out, "Write CSV here instead of stdout");

  auto* mkfs = app.add_subcommand("mkfs", "Format a new file system in the state directory");
  auto* cp = app.add_subcommand("cp", "Copy files; prefix file system paths with fs:");
  std::string src, dst;
  cp->add_option("src", src)->required();
  cp->add_option("dst", dst)->required();
  auto* cat = app.add_subcommand("cat", "Print a file");
  std::string path;
  cat->add_option("path", path)->required();
  auto* ls = app.add_subcommand("ls", "List a directory");
  std::string ls_path = "/";
  bool ls_long = false;
  ls->add_option("path", ls_path);
  ls->add_flag("-l", ls_long, "Show kind, mode, size and object base");
  auto* mv = app.add_subcommand("mv", "Rename");
  mv->add_option("src", src)->required();
  mv->add_option("dst", dst)->required();
  auto* rm = app.add_subcommand("rm", "Remove a file or empty directory");
  rm->add_option("path", path)->required();
  auto* mkdir = app.add_subcommand("mkdir", "Create a directory");
  mkdir->add_option("path", path)->required();
  auto* import = app.add_subcommand("import", "Adopt store objects as files");
  std::string prefix;
  import->add_option("--prefix", prefix, "Only objects whose name starts with this");
  auto* obj_put = app.add_subcommand("obj-put", "Put a local file as an object");
  std::string name;
  obj_put->add_option("name", name)->required();
  obj_put->add_option("file", src)->required();
  auto* obj_get = app.add_subcommand("obj-get", "Print an object");
  obj_get->add_option("name", name)->required();
  auto* obj_ls = app.add_subcommand("obj-ls", "List objects in the bucket");
  obj_ls->add_option("prefix", prefix);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      WorkloadSpec spec;
      spec.kind = ParseWorkloadKind(workload);
      spec.file_size = file_mib * kMiB;
      spec.record_size = record_mib * kMiB;
      spec.op_count = op_count;
      spec.dir_file_count = dir_files;
      spec.threads = threads;
      spec.seed = seed;
      BenchConfig config;
      if (!config_path.empty()) {
        ObjfsConfig c = LoadConfigFile(config_path);
        config.fs = c.fs;
        if (c.store.latency) config.store = c.store;
      }
      config.fs.mapping.scheme = ParseMappingScheme(mapping);
      config.fs.mapping.chunk_size = chunk_mib * kMiB;
      config.fs.naming = ParseNamingPolicy(naming);
      config.fs.cache.kind = ParseCacheKind(cache);
      const BenchSample s = RunWorkload(spec, config);
      const std::string row = CsvRow(s);
      std::cout << kCsvHeader << '\n' << row << '\n';
      if (!csv_path.empty()) {
        const bool fresh = !stdfs::exists(csv_path) || stdfs::file_size(csv_path) == 0;
        std::ofstream out(csv_path, std::ios::app);
        if (fresh) out << kCsvHeader << '\n';
        out << row << '\n';
      }
      return 0;
    }
    if (sweep->parsed()) {
      const std::string csv = Sweep(ReadWholeFile(grid_path));
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        WriteFileAtomically(sweep_out, csv);
      }
      return 0;
    }

    State st = OpenState(state_dir, config_path, mkfs->parsed());
    Filesystem& fs = *st.fs;
    const std::string& bucket = fs.config().bucket;
    if (mkfs->parsed()) {
      std::cout << "formatted " << state_dir << " (bucket " << bucket << ")\n";
    } else if (cp->parsed()) {
      if (IsFsPath(src) && IsFsPath(dst)) {
        fs.WriteFile(FsPart(dst), fs.ReadFile(FsPart(src)));
      } else if (IsFsPath(dst)) {
        fs.WriteFile(FsPart(dst), ToBytes(ReadWholeFile(src)));
      } else if (IsFsPath(src)) {
        WriteFileAtomically(dst, ToString(fs.ReadFile(FsPart(src))));
      } else {
        throw Error(Errc::kInvalidArgument, "one side of cp must be an fs: path");
      }
    } else if (cat->parsed()) {
      std::cout << ToString(fs.ReadFile(path));
    } else if (ls->parsed()) {
      for (const std::string& entry : fs.Readdir(ls_path)) {
        if (!ls_long) {
          std::cout << entry << '\n';
          continue;
        }
        const std::string child = ls_path == "/" ? "/" + entry : ls_path + "/" + entry;
        const InodeRecord r = fs.Lstat(child);
        std::cout << fmt::format("{}{:04o} {:>12} {} {}\n", KindChar(r.kind), r.mode, r.size,
                                 entry, r.object_base.empty() ? "" : "-> " + r.object_base);
      }
    } else if (mv->parsed()) {
      fs.Rename(src, dst);
    } else if (rm->parsed()) {
      if (fs.Lstat(path).kind == InodeKind::kDir) {
        fs.Rmdir(path);
      } else {
        fs.Unlink(path);
      }
    } else if (mkdir->parsed()) {
      fs.Mkdir(path);
    } else if (import->parsed()) {
      const ImportReport rep = fs.ImportObjects(prefix);
      std::cout << fmt::format("created {} already-owned {} collisions {}\n", rep.created,
                               rep.already_owned, rep.collisions.size());
      for (const std::string& c : rep.collisions) std::cout << "  collision: " << c << '\n';
    } else if (obj_put->parsed()) {
      st.store->Put(ObjectKey{bucket, name}, ToBytes(ReadWholeFile(src)));
    } else if (obj_get->parsed()) {
      std::cout << ToString(*st.store->Get(ObjectKey{bucket, name}).data);
    } else if (obj_ls->parsed()) {
      for (const std::string& n : st.store->ListAll(bucket, prefix)) {
        std::cout << n << '\t' << st.store->Head(ObjectKey{bucket, n}).size << '\n';
      }
    }
    st.Save();
  } catch (const Error& e) {
    std::cerr << "objfs: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "objfs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
