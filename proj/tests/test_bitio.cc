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

#include <random>

#include "doctest.h"
#include "hivc/bitio.h"
#include "hivc/error.h"

using namespace hivc;

TEST_SUITE("bitio") {
  TEST_CASE("bits are written most significant first") {
    BitWriter w;
    w.put_bits(0b101, 3);
    w.put_bit(true);
    w.put_bits(0, 4);
    w.put_bits(0x3, 2);
    CHECK(w.bit_count() == 10);
    REQUIRE(w.bytes().size() == 2);
    CHECK(w.bytes()[0] == 0b10110000);
    CHECK(w.bytes()[1] == 0b11000000);
  }

  TEST_CASE("random bit fields round-trip") {
    std::mt19937_64 rng(71);
    std::vector<std::pair<uint64_t, int>> fields;
    BitWriter w;
    for (int i = 0; i < 5000; ++i) {
      const int n = static_cast<int>(rng() % 65);
      const uint64_t v = n == 64 ? rng() : (rng() & ((uint64_t{1} << n) - 1));
      fields.push_back({v, n});
      w.put_bits(v, n);
    }
    BitReader r(w.bytes(), w.bit_count());
    for (auto [v, n] : fields) CHECK(r.get_bits(n) == v);
    CHECK(r.remaining() == 0);
    CHECK_THROWS_AS(r.get_bit(), DecodeError);
  }

  TEST_CASE("reader honours its bit limit") {
    const std::vector<uint8_t> b = {0xFF, 0xFF};
    BitReader r(b, 9);
    CHECK(r.get_bits(9) == 0x1FF);
    CHECK_THROWS_AS(r.get_bits(1), DecodeError);
    BitReader r2(b);
    CHECK(r2.remaining() == 16);
  }

  TEST_CASE("little-endian byte fields") {
    ByteWriter w;
    w.put_u8(0xAB);
    w.put_u16(0x1234);
    w.put_u32(0xDEADBEEF);
    w.put_i16(-2);
    w.put_f32(1.5f);
    const auto& b = w.bytes();
    REQUIRE(b.size() == 13);
    CHECK(b[1] == 0x34);
    CHECK(b[2] == 0x12);
    CHECK(b[3] == 0xEF);
    CHECK(b[6] == 0xDE);
    CHECK(b[7] == 0xFE);
    CHECK(b[8] == 0xFF);
    ByteReader r(b);
    CHECK(r.get_u8() == 0xAB);
    CHECK(r.get_u16() == 0x1234);
    CHECK(r.get_u32() == 0xDEADBEEF);
    CHECK(r.get_i16() == -2);
    CHECK(r.get_f32() == 1.5f);
    CHECK(r.at_end());
    CHECK_THROWS_AS(r.get_u8(), DecodeError);
  }

  TEST_CASE("varints and blocks") {
    ByteWriter w;
    const std::vector<uint64_t> vals = {0, 1, 127, 128, 300, 1ull << 35, ~0ull};
    for (uint64_t v : vals) w.put_varint(v);
    const std::vector<uint8_t> payload = {9, 8, 7};
    w.put_block(payload);
    ByteWriter one;
    one.put_varint(127);
    CHECK(one.size() == 1);
    one.put_varint(128);
    CHECK(one.size() == 3);
    ByteReader r(w.bytes());
    for (uint64_t v : vals) CHECK(r.get_varint() == v);
    const auto blk = r.get_block();
    CHECK(std::vector<uint8_t>(blk.begin(), blk.end()) == payload);
    CHECK(r.at_end());
  }

  TEST_CASE("truncated blocks and runaway varints are decode errors") {
    ByteWriter w;
    w.put_u32(10);
    w.put_u8(1);
    ByteReader r(w.bytes());
    CHECK_THROWS_AS(r.get_block(), DecodeError);
    const std::vector<uint8_t> bad(12, 0xFF);
    ByteReader r2(bad);
    CHECK_THROWS_AS(r2.get_varint(), DecodeError);
    ByteReader r3(std::span<const uint8_t>(bad.data(), 2));
    CHECK_THROWS_AS(r3.get_bytes(3), DecodeError);
  }
}
