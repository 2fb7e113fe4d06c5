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
#include <random>

#include "doctest.h"
#include "hivc/error.h"
#include "hivc/residual.h"
#include "test_util.h"

using namespace hivc;

namespace {

std::vector<ResidualPlane> smooth_residual(int w, int h, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<ResidualPlane> out;
  for (int c = 0; c < 3; ++c) {
    ResidualPlane r(w, h);
    const double ax = n(rng), ay = n(rng);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        r.at(x, y) = static_cast<int>(std::lround(20.0 * std::sin(0.3 * x + ax) * std::cos(0.2 * y + ay) + 2.0 * n(rng)));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

double rms(const std::vector<ResidualPlane>& r, const std::vector<RealPlane>& d) {
  double s = 0.0;
  size_t n = 0;
  for (size_t c = 0; c < r.size(); ++c) {
    for (size_t i = 0; i < r[c].size(); ++i) {
      s += (r[c][i] - d[c][i]) * (r[c][i] - d[c][i]);
      ++n;
    }
  }
  return std::sqrt(s / n);
}

std::vector<RealPlane> round_trip(const std::vector<ResidualPlane>& r, const ResidualParams& p) {
  const auto bytes = encode_residual(r, p, GreensKernel::harmonic());
  const ResidualData d = ResidualData::parse(bytes, r[0].width(), r[0].height(),
                                             static_cast<int>(r.size()), p.levels);
  return reconstruct_residual(d, GreensKernel::harmonic());
}

}  // namespace

TEST_SUITE("residual") {
  TEST_CASE("zero residual: every block skipped, decodes to zero") {
    const std::vector<ResidualPlane> zero(3, ResidualPlane(40, 24));
    const auto bytes = encode_residual(zero, {2.0, 0.5, 63}, GreensKernel::harmonic());
    const ResidualData d = ResidualData::parse(bytes, 40, 24, 3, 63);
    for (const auto& ch : d.channels) {
      for (const auto& b : ch) CHECK(b.skip());
    }
    for (const auto& p : reconstruct_residual(d, GreensKernel::harmonic())) {
      for (size_t i = 0; i < p.size(); ++i) CHECK(p[i] == 0.0);
    }
    CHECK(encode_residual(zero, {0.0, 0.5, 63}, GreensKernel::harmonic()).size() < 40);
  }

  TEST_CASE("coded blocks share one chroma mask") {
    std::mt19937_64 rng(111);
    const auto r = smooth_residual(48, 32, rng);
    const auto bytes = encode_residual(r, {3.0, 0.5, 127}, GreensKernel::harmonic());
    const ResidualData d = ResidualData::parse(bytes, 48, 32, 3, 127);
    REQUIRE(d.channels.size() == 3);
    long long luma = 0, chroma = 0;
    for (size_t b = 0; b < d.channels[1].size(); ++b) {
      CHECK(d.channels[1][b].mask == d.channels[2][b].mask);
      luma += d.channels[0][b].k();
      chroma += d.channels[1][b].k();
    }
    const long long blocks = static_cast<long long>(d.channels[0].size());
    CHECK(luma <= 3 * blocks);
    CHECK(luma >= 3 * blocks - 1);
    CHECK(chroma == (luma + 1) / 2);
  }

  TEST_CASE("more points per block lower the error") {
    std::mt19937_64 rng(112);
    const auto r = smooth_residual(64, 48, rng);
    double prev = 1e300;
    for (double ppb : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double e = rms(r, round_trip(r, {ppb, 0.5, 255}));
      CHECK(e < prev);
      prev = e;
    }
    // All 64 points with fine quantization: nearly exact.
    CHECK(rms(r, round_trip(r, {64.0, 1.0, 255})) < 1.0);
  }

  TEST_CASE("decode is deterministic and closed under re-encoding of the payload") {
    std::mt19937_64 rng(113);
    const auto r = smooth_residual(37, 29, rng);
    const ResidualParams p{2.0, 0.5, 31};
    const auto a = encode_residual(r, p, GreensKernel::harmonic());
    CHECK(encode_residual(r, p, GreensKernel::harmonic()) == a);
    const ResidualData d1 = ResidualData::parse(a, 37, 29, 3, 31);
    const ResidualData d2 = ResidualData::parse(a, 37, 29, 3, 31);
    CHECK(reconstruct_residual(d1, GreensKernel::harmonic()) ==
          reconstruct_residual(d2, GreensKernel::harmonic()));
  }

  TEST_CASE("corrupted residual payloads raise DecodeError") {
    std::mt19937_64 rng(114);
    const auto r = smooth_residual(40, 40, rng);
    const auto good = encode_residual(r, {2.0, 0.5, 63}, GreensKernel::harmonic());
    for (size_t n = 0; n < good.size(); n += 3) {
      CHECK_THROWS_AS(ResidualData::parse(std::span(good.data(), n), 40, 40, 3, 63), DecodeError);
    }
    int errors = 0;
    for (int t = 0; t < 500; ++t) {
      auto bad = good;
      bad[rng() % bad.size()] ^= static_cast<uint8_t>(1 + rng() % 255);
      try {
        ResidualData::parse(bad, 40, 40, 3, 63);
      } catch (const DecodeError&) {
        ++errors;
      }
    }
    CHECK(errors > 0);
  }

  TEST_CASE("compute and apply residual") {
    std::mt19937_64 rng(115);
    const Frame a = rct_forward(test::random_rgb(9, 7, rng));
    const Frame b = rct_forward(test::random_rgb(9, 7, rng));
    const auto r = compute_residual(a, b);
    std::vector<RealPlane> real;
    for (const auto& p : r) real.push_back(to_real(p));
    CHECK(apply_residual(b, real) == a);

    Frame y(2, 1, 1, ColorSpace::kGray);
    y.planes[0][0] = 250;
    y.planes[0][1] = 3;
    RealPlane d(2, 1);
    d[0] = 20.4;
    d[1] = -9.6;
    const Frame out = apply_residual(y, std::vector<RealPlane>{d});
    CHECK(out.planes[0][0] == 255);
    CHECK(out.planes[0][1] == 0);
    CHECK_THROWS_AS(compute_residual(a, Frame(9, 8, 3, ColorSpace::kYuv)), InvalidArgument);
    CHECK_THROWS_AS(apply_residual(a, std::vector<RealPlane>{d}), InvalidArgument);
  }
}
