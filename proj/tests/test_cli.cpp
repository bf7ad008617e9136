// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "bloomtree/codec.hpp"

#ifndef BLOOMTREE_CLI_PATH
#error "BLOOMTREE_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using namespace bloomtree;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(BLOOMTREE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("bloomtree_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

TEST_CASE("params") {
  auto r = run("params --n 10000 --fpr 0.01 --chunk-size 32");
  CHECK(r.code == 0);
  CHECK(r.out.find("m_raw=95851\n") != std::string::npos);
  CHECK(r.out.find("m=131072\n") != std::string::npos);
  CHECK(r.out.find("k=9\n") != std::string::npos);
  CHECK(r.out.find("chunks=512\n") != std::string::npos);
  CHECK(r.out.find("predicted_fpr=") != std::string::npos);

  auto tiny = run("params --n 1 --fpr 0.5 --chunk-size 1");
  CHECK(tiny.code == 0);
  CHECK(tiny.out.find("m=8\n") != std::string::npos);
  CHECK(tiny.out.find("k=6\n") != std::string::npos);

  CHECK(run("params --n 10 --fpr 0.01").code == 2);
  CHECK(run("params --n 10 --fpr 2 --chunk-size 8").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("build, root, prove, verify") {
  TempDir dir;
  write_text(dir.file("elems.txt"), "alice\nbob\ncarol\n");
  auto built = run("build --elements " + dir.file("elems.txt") + " --fpr 0.01 --chunk-size 8 --out " +
                   dir.file("f.bltr"));
  REQUIRE(built.code == 0);

  auto root = run("root --filter " + dir.file("f.bltr"));
  CHECK(root.code == 0);
  auto root_hex = trim(root.out);
  CHECK(root_hex.size() == 64);
  CHECK(root_hex == to_hex(codec::decode_filter(as_bytes(read_text(dir.file("f.bltr")))).root()));

  auto prove = run("prove --filter " + dir.file("f.bltr") + " --element bob --out " + dir.file("bob.blpf"));
  CHECK(prove.code == 0);
  CHECK(trim(prove.out) == "presence");

  auto verify = run("verify --root " + root_hex + " --element bob --proof " + dir.file("bob.blpf"));
  CHECK(verify.code == 0);
  CHECK(trim(verify.out) == "MaybePresent");

  auto via_filter = run("verify --filter " + dir.file("f.bltr") + " --element bob --proof " + dir.file("bob.blpf"));
  CHECK(via_filter.code == 0);

  // Proof checked against a different element.
  auto wrong = run("verify --root " + root_hex + " --element mallory --proof " + dir.file("bob.blpf"));
  CHECK(wrong.code == 1);
  CHECK(wrong.out.rfind("Invalid", 0) == 0);

  // Tampered proof body and tampered header both give Invalid.
  auto bytes = read_text(dir.file("bob.blpf"));
  auto body = bytes;
  body.back() = static_cast<char>(body.back() ^ 1);
  write_text(dir.file("body.blpf"), body);
  auto tampered = run("verify --root " + root_hex + " --element bob --proof " + dir.file("body.blpf"));
  CHECK(tampered.code == 1);
  CHECK(tampered.out.rfind("Invalid", 0) == 0);
  auto header = bytes;
  header[0] = 'X';
  write_text(dir.file("header.blpf"), header);
  CHECK(run("verify --root " + root_hex + " --element bob --proof " + dir.file("header.blpf")).code == 1);

  // Pinned params must match the echo.
  auto env = codec::decode_proof(as_bytes(bytes));
  auto pinned = [&](std::uint64_t m) {
    return run("verify --root " + root_hex + " --element bob --proof " + dir.file("bob.blpf") + " --m " +
               std::to_string(m) + " --k " + std::to_string(env.params.k) + " --chunk-size " +
               std::to_string(env.params.chunk_size));
  };
  CHECK(pinned(env.params.m).code == 0);
  CHECK(pinned(env.params.m * 2).code == 1);

  // Absence on an element that was never inserted, with the element read from a file.
  int absences = 0;
  for (int i = 0; i < 20 && absences == 0; ++i) {
    write_text(dir.file("elem.bin"), "outsider-" + std::to_string(i));
    auto p = run("prove --filter " + dir.file("f.bltr") + " --element-file " + dir.file("elem.bin") + " --out " +
                 dir.file("out.blpf"));
    REQUIRE(p.code == 0);
    if (trim(p.out) != "absence") continue;
    ++absences;
    auto v = run("verify --root " + root_hex + " --element-file " + dir.file("elem.bin") + " --proof " +
                 dir.file("out.blpf"));
    CHECK(v.code == 0);
    CHECK(trim(v.out) == "DefinitelyAbsent");
  }
  CHECK(absences == 1);

  CHECK(run("verify --root zz --element bob --proof " + dir.file("bob.blpf")).code == 2);
  CHECK(run("verify --element bob --proof " + dir.file("bob.blpf")).code == 2);
  CHECK(run("verify --root " + root_hex + " --proof " + dir.file("bob.blpf")).code == 2);
  CHECK(run("verify --root " + root_hex + " --element bob --proof " + dir.file("missing.blpf")).code == 3);
  CHECK(run("root --filter " + dir.file("missing.bltr")).code == 3);
  CHECK(run("root --filter " + dir.file("bob.blpf")).code == 3);
}

TEST_CASE("build edge cases") {
  TempDir dir;
  write_text(dir.file("empty.txt"), "");
  REQUIRE(run("build --elements " + dir.file("empty.txt") + " --fpr 0.1 --chunk-size 8 --out " + dir.file("e.bltr"))
              .code == 0);
  auto empty = codec::decode_filter(as_bytes(read_text(dir.file("e.bltr"))));
  CHECK(empty.filter().popcount() == 0);

  write_text(dir.file("dups.txt"), "a\nb\na\nb\nb\n");
  write_text(dir.file("dedup.txt"), "a\nb\n");
  REQUIRE(run("build --elements " + dir.file("dups.txt") + " --fpr 0.01 --chunk-size 4 --out " + dir.file("d1.bltr"))
              .code == 0);
  REQUIRE(run("build --elements " + dir.file("dedup.txt") + " --fpr 0.01 --chunk-size 4 --out " + dir.file("d2.bltr"))
              .code == 0);
  CHECK(read_text(dir.file("d1.bltr")) == read_text(dir.file("d2.bltr")));

  CHECK(run("build --elements " + dir.file("nope.txt") + " --fpr 0.01 --chunk-size 4 --out " + dir.file("x.bltr"))
            .code == 3);
}

TEST_CASE("experiment") {
  TempDir dir;
  const std::string args = "experiment --seed 9 --chunk-sizes 8,32 --fprs 0.1 --ns 100,200 --sample-size 5 --out ";
  auto a = run(args + dir.file("a.csv"));
  auto b = run(args + dir.file("b.csv"));
  CHECK(a.code == 0);
  auto csv = read_text(dir.file("a.csv"));
  CHECK(csv == read_text(dir.file("b.csv")));
  CHECK(csv.rfind("chunk_size,fpr,n,m_bits,k,filter_bytes,absence_bytes,median_presence_bytes\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(a.out == b.out);
  CHECK(run("experiment --sample-size 0").code == 2);
}
