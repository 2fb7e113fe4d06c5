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

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hivc/entropy.h"
#include "hivc/error.h"

using namespace hivc;

namespace {

std::vector<uint16_t> draw(const std::vector<double>& p, size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> d(p.begin(), p.end());
  std::vector<uint16_t> s(n);
  for (auto& v : s) v = static_cast<uint16_t>(d(rng));
  return s;
}

std::vector<uint64_t> histogram_of(const std::vector<uint16_t>& s, size_t alphabet) {
  std::vector<uint64_t> h(alphabet, 0);
  for (uint16_t v : s) ++h[v];
  return h;
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("category examples") {
    CHECK(to_category(0) == CategorySymbol{0, 0});
    CHECK(to_category(5) == CategorySymbol{3, 0b101});
    CHECK(to_category(-1) == CategorySymbol{1, 0});
    CHECK(to_category(-5) == CategorySymbol{3, 0b010});
    CHECK(to_category(kMaxCategoryValue).category == 15);
    CHECK_THROWS_AS(to_category(kMaxCategoryValue + 1), InvalidArgument);
    CHECK_THROWS_AS(to_category(-kMaxCategoryValue - 1), InvalidArgument);
  }

  TEST_CASE("categories are bijective over the whole range") {
    for (int v = -kMaxCategoryValue; v <= kMaxCategoryValue; ++v) {
      const CategorySymbol s = to_category(v);
      const int mag = std::abs(v);
      CHECK(s.category == (v == 0 ? 0 : static_cast<int>(std::bit_width(static_cast<unsigned>(mag)))));
      if (s.category > 0) {
        CHECK(mag >= (1 << (s.category - 1)));
        CHECK(mag <= (1 << s.category) - 1);
        CHECK(s.bits < (1u << s.category));
        if (v < 0) CHECK(s.bits == static_cast<uint32_t>(v + (1 << s.category) - 1));
      }
      CHECK(from_category(s) == v);
    }
  }

  TEST_CASE("normalization examples and invariants") {
    const std::vector<uint64_t> uniform(256, 7);
    for (uint32_t c : normalize_counts(uniform, 8)) CHECK(c == 1);
    const std::vector<uint64_t> skew = {900, 90, 10};
    const auto n = normalize_counts(skew, 8);
    CHECK(std::accumulate(n.begin(), n.end(), 0u) == 256u);
    for (uint32_t c : n) CHECK(c >= 1);
    CHECK(n[0] > n[1]);
    CHECK(n[1] > n[2]);
    CHECK(normalize_counts(skew, 8) == n);

    std::mt19937_64 rng(81);
    for (int t = 0; t < 500; ++t) {
      const int log = kMinTableLog + static_cast<int>(rng() % (kMaxTableLog - kMinTableLog + 1));
      const size_t alphabet = 1 + rng() % 40;
      std::vector<uint64_t> h(alphabet);
      for (auto& c : h) c = (rng() % 3 == 0) ? 0 : rng() % (1ull << (rng() % 30));
      if (std::accumulate(h.begin(), h.end(), uint64_t{0}) == 0) h[0] = 1;
      const auto c = normalize_counts(h, log);
      CHECK(std::accumulate(c.begin(), c.end(), uint64_t{0}) == (uint64_t{1} << log));
      for (size_t s = 0; s < alphabet; ++s) CHECK((h[s] > 0) == (c[s] > 0));
    }
    CHECK_THROWS_AS(normalize_counts(std::vector<uint64_t>{0, 0}, 8), InvalidArgument);
    CHECK_THROWS_AS(normalize_counts(skew, 4), InvalidArgument);
    CHECK_THROWS_AS(normalize_counts(std::vector<uint64_t>(33, 1), 5), InvalidArgument);
  }

  TEST_CASE("table construction rejects bad counts") {
    CHECK_THROWS_AS(FseTable(std::vector<uint32_t>{10, 10}, 5), InvalidArgument);
    CHECK_THROWS_AS(FseTable(std::vector<uint32_t>{0, 0}, 5), InvalidArgument);
    const FseTable t(std::vector<uint32_t>{20, 12}, 5);
    CHECK(t.spread().size() == 32);
    CHECK(std::count(t.spread().begin(), t.spread().end(), 0) == 20);
  }

  TEST_CASE("single-symbol stream costs almost nothing") {
    const std::vector<uint16_t> s(100000, 0);
    const FseTable t = FseTable::from_histogram(histogram_of(s, 1), 5);
    const auto bytes = fse_encode(s, t);
    CHECK(bytes.size() <= 2);
    CHECK(fse_decode(bytes, t, s.size()) == s);
    const std::vector<int32_t> zeros(5000, 0);
    CHECK(encode_integers(zeros).size() <= 16);
  }

  TEST_CASE("skewed three-symbol stream is within 2% of the entropy") {
    const std::vector<double> p = {0.9, 0.09, 0.01};
    const size_t n = 100000;
    const auto s = draw(p, n, 82);
    double h = 0.0;
    for (double q : p) h -= q * std::log2(q);
    // -(0.9 log2 0.9 + 0.09 log2 0.09 + 0.01 log2 0.01)
    CHECK(h == doctest::Approx(0.51590).epsilon(1e-4));
    const FseTable t = FseTable::from_histogram(histogram_of(s, 3), 12);
    const auto bytes = fse_encode(s, t);
    const double bits = 8.0 * static_cast<double>(bytes.size());
    MESSAGE("coded bits/symbol ", bits / n, " entropy ", h);
    CHECK(bits <= 1.02 * n * h + 12 + 8);
    CHECK(fse_decode(bytes, t, n) == s);
  }

  TEST_CASE("64 KiB streams over larger alphabets stay near the empirical entropy") {
    std::vector<double> p(16);
    for (int i = 0; i < 16; ++i) p[i] = std::pow(0.6, i);
    const size_t n = 65536;
    const auto s = draw(p, n, 83);
    const auto hist = histogram_of(s, 16);
    const double emp = empirical_entropy(s);
    double h = 0.0;
    for (uint64_t c : hist) {
      if (c) h -= static_cast<double>(c) / n * std::log2(static_cast<double>(c) / n);
    }
    CHECK(emp == doctest::Approx(h));
    const FseTable t = FseTable::from_histogram(hist, 12);
    const auto bytes = fse_encode(s, t);
    CHECK(8.0 * bytes.size() <= 1.02 * n * h + 20);
    CHECK(fse_decode(bytes, t, n) == s);
  }

  TEST_CASE("encode rejects symbols absent from the table") {
    const FseTable t(std::vector<uint32_t>{32, 0}, 5);
    CHECK_THROWS_AS(fse_encode(std::vector<uint16_t>{0, 1}, t), InvalidArgument);
    CHECK_THROWS_AS(fse_encode(std::vector<uint16_t>{2}, t), InvalidArgument);
  }

  TEST_CASE("integer payloads round-trip under fuzzing") {
    std::mt19937_64 rng(84);
    for (int t = 0; t < 300; ++t) {
      const size_t n = rng() % 3000;
      const int spread = 1 << (rng() % 16);
      std::vector<int32_t> v(n);
      std::geometric_distribution<int> g(1.0 / (1 + rng() % 50));
      for (auto& x : v) {
        const int m = std::min(g(rng) % spread, kMaxCategoryValue);
        x = (rng() & 1) ? m : -m;
      }
      const auto bytes = encode_integers(v);
      CHECK(decode_integers(bytes, n) == v);
      if (n > 0) CHECK_THROWS_AS(decode_integers(bytes, n - 1), DecodeError);
    }
    CHECK(encode_integers(std::vector<int32_t>{}).size() == 1);
    CHECK(decode_integers(encode_integers(std::vector<int32_t>{}), 0).empty());
  }

  TEST_CASE("corrupted payloads fail cleanly") {
    std::mt19937_64 rng(85);
    std::vector<int32_t> v(2000);
    std::normal_distribution<double> d(0.0, 30.0);
    for (auto& x : v) x = static_cast<int32_t>(std::lround(d(rng)));
    const auto good = encode_integers(v);
    int errors = 0;
    int decoded = 0;
    for (int t = 0; t < 3000; ++t) {
      auto bad = good;
      const int flips = 1 + static_cast<int>(rng() % 4);
      for (int f = 0; f < flips; ++f) bad[rng() % bad.size()] ^= static_cast<uint8_t>(1 + rng() % 255);
      if (t % 7 == 0) bad.resize(rng() % bad.size());
      try {
        const auto out = decode_integers(bad, v.size());
        CHECK(out.size() <= v.size());
        ++decoded;
      } catch (const Error&) {
        ++errors;
      }
    }
    CHECK(errors + decoded == 3000);
    CHECK(errors > 0);
  }

  TEST_CASE("dpcm round-trip") {
    const std::vector<int32_t> v = {5, 7, 7, -3, 100, 0};
    const auto d = dpcm_forward(v);
    CHECK(d == std::vector<int32_t>{5, 2, 0, -10, 103, -100});
    CHECK(dpcm_inverse(d) == v);
  }

  TEST_CASE("table log grows with the stream") {
    CHECK(choose_table_log(10, 2) == kMinTableLog);
    CHECK(choose_table_log(1 << 20, 16) == kMaxTableLog);
    CHECK(choose_table_log(100, 16) >= 5);
    CHECK_THROWS_AS(choose_table_log(10, 5000), InvalidArgument);
  }
}
