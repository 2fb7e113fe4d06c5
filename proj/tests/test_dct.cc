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
#include <numbers>
#include <random>

#include "doctest.h"
#include "hivc/dct.h"
#include "test_util.h"

using namespace hivc;

namespace {

// Orthonormal DCT-II straight from the definition.
Block8 naive_dct(const Block8& x) {
  Block8 out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) {
        for (int xx = 0; xx < 8; ++xx) {
          s += x[8 * y + xx] * std::cos((2 * xx + 1) * u * std::numbers::pi / 16.0) *
               std::cos((2 * y + 1) * v * std::numbers::pi / 16.0);
        }
      }
      const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      const double cv = v == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      out[8 * v + u] = cu * cv * s;
    }
  }
  return out;
}

Block8 random_block(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-300.0, 300.0);
  Block8 b;
  for (double& v : b) v = d(rng);
  return b;
}

double max_diff(const Block8& a, const Block8& b) {
  double m = 0.0;
  for (int i = 0; i < 64; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("dct") {
  TEST_CASE("constant block has a single DC coefficient 8v") {
    Block8 b;
    b.fill(3.5);
    const Block8 c = dct2_aan_8x8(b);
    CHECK(c[0] == doctest::Approx(28.0).epsilon(1e-12));
    for (int i = 1; i < 64; ++i) CHECK(std::abs(c[i]) < 1e-12);
  }

  TEST_CASE("zero block maps to zero") {
    Block8 z{};
    const Block8 c = dct2_aan_8x8(z);
    const Block8 back = idct2_aan_8x8(z);
    for (int i = 0; i < 64; ++i) {
      CHECK(c[i] == 0.0);
      CHECK(back[i] == 0.0);
    }
  }

  TEST_CASE("AAN matches the definition and round-trips") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      const Block8 x = random_block(rng);
      const Block8 c = dct2_aan_8x8(x);
      CHECK(max_diff(c, naive_dct(x)) <= 1e-10);
      CHECK(max_diff(idct2_aan_8x8(c), x) <= 1e-10);
    }
  }

  TEST_CASE("raw kernels carry the documented per-coefficient factors") {
    std::mt19937_64 rng(12);
    const Block8 x = random_block(rng);
    Block8 raw = x;
    aan::forward_8x8(raw);
    const Block8 ref = naive_dct(x);
    const auto& s = aan::scale_factors();
    for (int v = 0; v < 8; ++v) {
      for (int u = 0; u < 8; ++u) {
        CHECK(raw[8 * v + u] ==
              doctest::Approx(8.0 * s[u] * s[v] * ref[8 * v + u]).epsilon(1e-10));
      }
    }
    Block8 scaled;
    for (int v = 0; v < 8; ++v) {
      for (int u = 0; u < 8; ++u) scaled[8 * v + u] = ref[8 * v + u] * s[u] * s[v] / 8.0;
    }
    aan::inverse_8x8(scaled);
    CHECK(max_diff(scaled, x) <= 1e-9);
  }

  TEST_CASE("scale factors") {
    const auto& s = aan::scale_factors();
    CHECK(s[0] == 1.0);
    for (int k = 1; k < 8; ++k) {
      CHECK(s[k] == doctest::Approx(std::sqrt(2.0) * std::cos(k * std::numbers::pi / 16.0)));
    }
  }

  TEST_CASE("1D pass uses 5 multiplications") {
    using Op = test::CountingOp;
    Op::reset();
    std::array<Op, 8> d;
    for (int i = 0; i < 8; ++i) d[i] = Op(i);
    aan::forward_1d(d.data(), 1);
    CHECK(Op::muls == 5);
    CHECK(Op::adds == 29);
    Op::muls = Op::adds = 0;
    aan::inverse_1d(d.data(), 1);
    CHECK(Op::muls == 5);
    CHECK(Op::adds == 29);
  }
}
