/*
Copyright 2026 The HIVC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <sys/wait.h>

#include <array>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hivc/bitio.h"
#include "hivc/bitstream.h"
#include "hivc/io.h"

using namespace hivc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HIVC_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// key=value lines of a report.
std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("hivc_cli_" + std::to_string(std::random_device()()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

// Synthesizes a clip and encodes it with the defaults.
void make_stream(const Workspace& w, int width, int height, int frames) {
  const Run s = run("synth -o " + (w / "in.y4m") + " --width " + std::to_string(width) +
                    " --height " + std::to_string(height) + " --frames " +
                    std::to_string(frames));
  REQUIRE(s.code == 0);
  const Run e = run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --self-check --recon " +
                    (w / "recon.y4m"));
  INFO(e.out);
  REQUIRE(e.code == 0);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("encode and decode smoke test") {
    Workspace w;
    make_stream(w, 96, 64, 3);
    CHECK(fs::file_size(w / "s.hivc") > 21);
    const Run d = run("decode " + (w / "s.hivc") + " -o " + (w / "out.y4m"));
    INFO(d.out);
    REQUIRE(d.code == 0);
    const auto rep = parse_report(d.out);
    CHECK(rep.at("frames") == "3");
    // The decoder output is the encoder's closed-loop reconstruction.
    CHECK(read_file(w / "out.y4m") == read_file(w / "recon.y4m"));
  }

  TEST_CASE("encode report") {
    Workspace w;
    REQUIRE(run("synth -o " + (w / "in.y4m") + " --width 64 --height 48 --frames 2").code == 0);
    const Run e = run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --report " +
                      (w / "r.txt") + " --set gop_size=2 --self-check");
    REQUIRE(e.code == 0);
    const auto rep = parse_report(e.out);
    CHECK(rep.at("self_check") == "pass");
    CHECK(rep.at("config.gop_size") == "2");
    CHECK(rep.count("psnr.mean") == 1);
    CHECK(std::stoul(rep.at("bytes")) == fs::file_size(w / "s.hivc"));
    const auto saved = read_file(w / "r.txt");
    CHECK(parse_report(std::string(saved.begin(), saved.end())) == rep);
  }

  TEST_CASE("usage and configuration errors exit with 1") {
    Workspace w;
    REQUIRE(run("synth -o " + (w / "in.y4m") + " --width 32 --height 32 --frames 1").code == 0);
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("encode " + (w / "in.y4m")).code == 1);
    const Run bad = run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --set nope=1");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("nope") != std::string::npos);
    CHECK(run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --set gop_size=0").code == 1);
    make_stream(w, 32, 32, 1);
    CHECK(run("decode " + (w / "s.hivc") + " --bench --runs 2").code == 1);
  }

  TEST_CASE("missing input exits with 2 and names the path") {
    Workspace w;
    const std::string missing = w / "does_not_exist.y4m";
    const Run r = run("encode " + missing + " -o " + (w / "s.hivc"));
    CHECK(r.code == 2);
    CHECK(r.out.find(missing) != std::string::npos);
    const Run d = run("decode " + (w / "nothing.hivc"));
    CHECK(d.code == 2);
    CHECK(d.out.find("nothing.hivc") != std::string::npos);
  }

  TEST_CASE("corrupt stream exits with 4 and names the frame") {
    Workspace w;
    make_stream(w, 64, 48, 3);
    auto bytes = read_file(w / "s.hivc");
    const StreamLayout l = inspect_stream(bytes);
    // Overwrite the flow payload of frame 1.
    ByteReader r(std::span<const uint8_t>(bytes).subspan(l.gops[0].offset + 4));
    r.get_block();
    r.get_block();
    const size_t pos = l.gops[0].offset + 4 + r.position();
    const uint32_t len = bytes[pos] | bytes[pos + 1] << 8 | bytes[pos + 2] << 16 |
                         static_cast<uint32_t>(bytes[pos + 3]) << 24;
    for (size_t i = 4; i < 4 + len; ++i) bytes[pos + i] = 0xFF;
    write_file(w / "bad.hivc", bytes);
    const Run d = run("decode " + (w / "bad.hivc") + " -o " + (w / "out.y4m"));
    INFO(d.out);
    CHECK(d.code == 4);
    CHECK(d.out.find("frame 1") != std::string::npos);

    std::vector<uint8_t> magic = bytes;
    magic[0] = 'X';
    write_file(w / "magic.hivc", magic);
    CHECK(run("decode " + (w / "magic.hivc")).code == 4);
  }

  TEST_CASE("inspect accounting") {
    Workspace w;
    make_stream(w, 96, 64, 3);
    const Run i = run("inspect " + (w / "s.hivc"));
    REQUIRE(i.code == 0);
    const auto rep = parse_report(i.out);
    const size_t file = fs::file_size(w / "s.hivc");
    CHECK(rep.at("gops") == "1");
    size_t payload = 0;
    double share = 0.0;
    for (const char* k : {"framing", "intra", "intra_residual", "flow", "residual"}) {
      payload += std::stoul(rep.at(std::string("bytes.") + k));
      share += std::stod(rep.at(std::string("share.") + k));
    }
    CHECK(payload == file - std::stoul(rep.at("bytes.header")));
    CHECK(std::stoul(rep.at("bytes.total")) == file);
    share += std::stod(rep.at("share.header"));
    CHECK(std::abs(share - 1.0) < 1e-5);
  }

  TEST_CASE("inspect of a truncated stream reports the last valid GOP") {
    Workspace w;
    REQUIRE(run("synth -o " + (w / "in.y4m") + " --width 48 --height 32 --frames 5").code == 0);
    REQUIRE(run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --set gop_size=2").code ==
            0);
    auto bytes = read_file(w / "s.hivc");
    const StreamLayout l = inspect_stream(bytes);
    REQUIRE(l.gops.size() == 3);
    bytes.resize(l.gops[2].offset + 10);
    write_file(w / "t.hivc", bytes);
    const Run i = run("inspect " + (w / "t.hivc"));
    CHECK(i.code == 4);
    CHECK(i.out.find("last valid GOP: 1") != std::string::npos);
  }

  TEST_CASE("metrics of identical videos is infinite") {
    Workspace w;
    REQUIRE(run("synth -o " + (w / "a.y4m") + " --width 32 --height 24 --frames 2").code == 0);
    const Run m = run("metrics " + (w / "a.y4m") + " " + (w / "a.y4m"));
    REQUIRE(m.code == 0);
    const auto rep = parse_report(m.out);
    CHECK(rep.at("psnr.mean") == "inf");
    CHECK(rep.at("identical") == "true");
    REQUIRE(run("synth -o " + (w / "b.y4m") + " --width 32 --height 24 --frames 2 --seed 9").code ==
            0);
    const auto other = parse_report(run("metrics " + (w / "a.y4m") + " " + (w / "b.y4m")).out);
    CHECK(std::isfinite(std::stod(other.at("psnr.mean"))));
  }

  TEST_CASE("decode benchmark") {
    Workspace w;
    make_stream(w, 480, 205, 2);
    const Run b = run("decode " + (w / "s.hivc") + " --bench --runs 5 --threads 1");
    REQUIRE(b.code == 0);
    const auto rep = parse_report(b.out);
    CHECK(rep.at("runs") == "5");
    CHECK(std::stod(rep.at("fps")) > 0.0);
    for (int i = 0; i < 5; ++i) CHECK(rep.count("run." + std::to_string(i) + ".seconds") == 1);
    for (const char* s : {"intra_solve", "warp", "residual_dct", "entropy"}) {
      CHECK(rep.count(std::string("stage.") + s + "_seconds") == 1);
    }
  }

  TEST_CASE("target ratio") {
    Workspace w;
    REQUIRE(run("synth -o " + (w / "in.y4m") + " --width 160 --height 96 --frames 4").code == 0);
    const Run e = run("encode " + (w / "in.y4m") + " -o " + (w / "s.hivc") + " --target-ratio 100");
    REQUIRE(e.code == 0);
    const double ratio = std::stod(parse_report(e.out).at("ratio"));
    MESSAGE("ratio ", ratio);
    CHECK(ratio >= 90.0);
    CHECK(ratio <= 110.0);
  }

  TEST_CASE("HIVC_THREADS must be a positive number") {
    Workspace w;
    make_stream(w, 32, 32, 1);
    const Run r = run("decode " + (w / "s.hivc") + " --threads 0");
    CHECK(r.code == 0);
    setenv("HIVC_THREADS", "abc", 1);
    const Run bad = run("decode " + (w / "s.hivc"));
    unsetenv("HIVC_THREADS");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("HIVC_THREADS") != std::string::npos);
  }
}
