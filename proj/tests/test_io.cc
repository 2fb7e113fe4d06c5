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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "hivc/io.h"
#include "test_util.h"

using namespace hivc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hivc_io_" + std::to_string(std::random_device()()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("PPM and PGM round-trip exactly") {
    TempDir dir;
    std::mt19937_64 rng(121);
    const Frame rgb = test::random_rgb(13, 7, rng);
    write_pnm(dir.path / "a.ppm", rgb);
    CHECK(read_pnm(dir.path / "a.ppm") == rgb);
    Frame gray(5, 3, 1, ColorSpace::kGray);
    for (size_t i = 0; i < gray.planes[0].size(); ++i) gray.planes[0][i] = static_cast<int>(i * 17);
    write_pnm(dir.path / "g.pgm", gray);
    CHECK(read_pnm(dir.path / "g.pgm") == gray);
  }

  TEST_CASE("PNM header parsing tolerates comments") {
    TempDir dir;
    std::string s = "P6\n# a comment\n2 1\n# another\n255\n";
    s += std::string("\x01\x02\x03\x04\x05\x06", 6);
    write_text(dir.path / "c.ppm", s);
    const Frame f = read_pnm(dir.path / "c.ppm");
    CHECK(f.width == 2);
    CHECK(f.planes[2][1] == 6);
  }

  TEST_CASE("PNM errors") {
    TempDir dir;
    CHECK_THROWS_AS(read_pnm(dir.path / "missing.ppm"), IoError);
    write_text(dir.path / "p3.ppm", "P3\n1 1\n255\n1 2 3\n");
    CHECK_THROWS_AS(read_pnm(dir.path / "p3.ppm"), IoError);
    write_text(dir.path / "deep.ppm", "P6\n1 1\n65535\n\x01\x02\x03\x04\x05\x06");
    CHECK_THROWS_AS(read_pnm(dir.path / "deep.ppm"), IoError);
    write_text(dir.path / "short.ppm", "P6\n4 4\n255\nabc");
    CHECK_THROWS_AS(read_pnm(dir.path / "short.ppm"), IoError);
    write_text(dir.path / "nan.ppm", "P6\nx 4\n255\n");
    CHECK_THROWS_AS(read_pnm(dir.path / "nan.ppm"), IoError);
  }

  TEST_CASE("Y4M round-trip is close and its second generation is stable") {
    TempDir dir;
    std::mt19937_64 rng(122);
    Video v;
    v.info = {16, 10, 30000, 1001};
    for (int i = 0; i < 3; ++i) v.frames.push_back(test::random_rgb(16, 10, rng));
    write_y4m(dir.path / "a.y4m", v);
    const Video r = read_y4m(dir.path / "a.y4m");
    CHECK(r.info.fps_num == 30000);
    CHECK(r.info.fps_den == 1001);
    REQUIRE(r.frames.size() == 3);
    for (size_t f = 0; f < 3; ++f) {
      for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i < v.frames[f].planes[c].size(); ++i) {
          CHECK(std::abs(r.frames[f].planes[c][i] - v.frames[f].planes[c][i]) <= 3);
        }
      }
    }
    write_y4m(dir.path / "b.y4m", r);
    const Video r2 = read_y4m(dir.path / "b.y4m");
    write_y4m(dir.path / "c.y4m", r2);
    CHECK(read_file(dir.path / "b.y4m") == read_file(dir.path / "c.y4m"));
  }

  TEST_CASE("Y4M 4:2:0 and mono input") {
    TempDir dir;
    std::string s = "YUV4MPEG2 W4 H2 F25:1 Ip A1:1 C420jpeg\nFRAME\n";
    s += std::string(8, '\x80');  // Y
    s += std::string(2, '\x80');  // U
    s += std::string(2, '\x80');  // V
    write_text(dir.path / "a.y4m", s);
    const Video v = read_y4m(dir.path / "a.y4m");
    REQUIRE(v.frames.size() == 1);
    for (int c = 0; c < 3; ++c) CHECK(v.frames[0].planes[c][5] == 128);
    std::string m = "YUV4MPEG2 W2 H1 F25:1 Cmono\nFRAME\n";
    m += "\x10\xF0";
    write_text(dir.path / "m.y4m", m);
    const Video g = read_y4m(dir.path / "m.y4m");
    CHECK(g.frames[0].planes[1][0] == 16);
    CHECK(g.frames[0].planes[0][1] == 240);
  }

  TEST_CASE("Y4M errors") {
    TempDir dir;
    write_text(dir.path / "a.y4m", "YUV4MPEG W4 H2\n");
    CHECK_THROWS_AS(read_y4m(dir.path / "a.y4m"), IoError);
    write_text(dir.path / "b.y4m", "YUV4MPEG2 W4 H2 C422\nFRAME\n");
    CHECK_THROWS_AS(read_y4m(dir.path / "b.y4m"), IoError);
    write_text(dir.path / "c.y4m", "YUV4MPEG2 W4 H2 C444\nFRAME\nabc");
    CHECK_THROWS_AS(read_y4m(dir.path / "c.y4m"), IoError);
    write_text(dir.path / "d.y4m", "YUV4MPEG2 H2 C444\n");
    CHECK_THROWS_AS(read_y4m(dir.path / "d.y4m"), IoError);
  }

  TEST_CASE("read_video dispatches on the path") {
    TempDir dir;
    std::mt19937_64 rng(123);
    Video v;
    v.info = {6, 4, 24, 1};
    for (int i = 0; i < 3; ++i) v.frames.push_back(test::random_rgb(6, 4, rng));
    write_video(dir.path / "seq", v);
    const Video back = read_video(dir.path / "seq");
    CHECK(back.frames == v.frames);
    Video one = v;
    one.frames.resize(1);
    write_video(dir.path / "one.ppm", one);
    CHECK(read_video(dir.path / "one.ppm").frames == one.frames);
    try {
      read_video(dir.path / "absent.y4m");
      FAIL("no error");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("absent.y4m") != std::string::npos);
    }
  }
}
