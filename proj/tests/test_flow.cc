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

#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hivc/error.h"
#include "hivc/flow.h"
#include "hivc/synthetic.h"
#include "test_util.h"

using namespace hivc;

namespace {

struct Mean {
  double u = 0.0;
  double v = 0.0;
};

Mean region_mean(const FlowField& f, int x0, int y0, int x1, int y1) {
  Mean m;
  int n = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      m.u += f.u.at(x, y);
      m.v += f.v.at(x, y);
      ++n;
    }
  }
  m.u /= n;
  m.v /= n;
  return m;
}

double max_abs(const FlowField& f) {
  double m = 0.0;
  for (size_t i = 0; i < f.u.size(); ++i) {
    m = std::max({m, std::abs(f.u[i]), std::abs(f.v[i])});
  }
  return m;
}

double flow_sse(const FlowField& a, const FlowField& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.u.size(); ++i) {
    s += (a.u[i] - b.u[i]) * (a.u[i] - b.u[i]) + (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  }
  return s;
}

double interior_psnr(const RealPlane& a, const RealPlane& b, int border) {
  double s = 0.0;
  int n = 0;
  for (int y = border; y < a.height() - border; ++y) {
    for (int x = border; x < a.width() - border; ++x) {
      const double d = a.at(x, y) - b.at(x, y);
      s += d * d;
      ++n;
    }
  }
  return 10.0 * std::log10(255.0 * 255.0 / (s / n));
}

}  // namespace

TEST_SUITE("flow") {
  TEST_CASE("identical frames give zero flow") {
    const FramePair p = shifted_pair(96, 80, 0.0, 0.0, 3);
    CHECK(max_abs(flow_brox(p.frame_t, p.frame_t)) <= 0.05);
    CHECK(max_abs(flow_horn_schunck(p.frame_t, p.frame_t)) <= 1e-9);
  }

  TEST_CASE("Brox recovers a global shift") {
    for (uint64_t seed : {1, 2, 3}) {
      const FramePair p = shifted_pair(128, 96, 2.0, 0.0, seed);
      const FlowField f = flow_brox(p.frame_t, p.frame_prev);
      CHECK(f.sane());
      const Mean m = region_mean(f, 5, 5, 123, 91);
      CHECK(std::abs(m.u - 2.0) <= 0.2);
      CHECK(std::abs(m.v) <= 0.2);
      // Backward warping consistency.
      CHECK(interior_psnr(warp_plane(p.frame_prev, f), p.frame_t, 5) >= 35.0);
    }
  }

  TEST_CASE("Brox separates two moving regions") {
    const FramePair p = two_object_pair(128, 96, 4);
    const FlowField f = flow_brox(p.frame_t, p.frame_prev);
    const Mean left = region_mean(f, 5, 5, 59, 91);
    const Mean right = region_mean(f, 69, 5, 123, 91);
    MESSAGE("left ", left.u, ",", left.v, " right ", right.u, ",", right.v);
    CHECK(std::abs(left.u - 2.0) <= 0.4);
    CHECK(std::abs(left.v) <= 0.4);
    CHECK(std::abs(right.u) <= 0.4);
    CHECK(std::abs(right.v - 2.0) <= 0.4);
  }

  TEST_CASE("Horn-Schunck with strong smoothing recovers a unit shift") {
    const FramePair p = shifted_pair(128, 96, 1.0, 0.0, 5);
    const FlowField f = flow_horn_schunck(p.frame_t, p.frame_prev, 20.0, 2000);
    for (int y = 10; y < 86; y += 4) {
      for (int x = 10; x < 118; x += 4) {
        CHECK(std::abs(f.u.at(x, y) - 1.0) <= 0.3);
        CHECK(std::abs(f.v.at(x, y)) <= 0.3);
      }
    }
  }

  TEST_CASE("Brox predicts the two-object pair better than Horn-Schunck") {
    const FramePair p = two_object_pair(128, 96, 6);
    const double brox = prediction_mse(p.frame_t, p.frame_prev, flow_brox(p.frame_t, p.frame_prev));
    double best_hs = 1e300;
    for (double a : {5.0, 10.0, 20.0}) {
      best_hs = std::min(best_hs, prediction_mse(p.frame_t, p.frame_prev,
                                                 flow_horn_schunck(p.frame_t, p.frame_prev, a)));
    }
    MESSAGE("brox mse ", brox, " best hs ", best_hs);
    CHECK(brox < best_hs);
  }

  TEST_CASE("non-finite input is rejected") {
    RealPlane a(32, 32, 1.0);
    RealPlane b = a;
    b.at(3, 3) = std::nan("");
    CHECK_THROWS_AS(flow_brox(a, b), InvalidArgument);
    CHECK_THROWS_AS(flow_horn_schunck(b, a), InvalidArgument);
    CHECK_THROWS_AS(flow_brox(a, RealPlane(31, 32)), InvalidArgument);
  }

  TEST_CASE("compress_flow: zero flow is one leaf and exact") {
    const FlowField zero(64, 48);
    const CompressedFlow c = compress_flow(zero, 50, 64);
    CHECK(c.u.tree.leaf_count() == 1);
    CHECK(c.v.tree.leaf_count() == 1);
    const auto bytes = c.serialize();
    CHECK(bytes.size() <= 40);
    const FlowField back = CompressedFlow::parse(bytes, 64, 48, 64).decompress();
    CHECK(back == zero);
  }

  TEST_CASE("compress_flow: two-region flow is exact up to quantization") {
    FlowField f(64, 48);
    for (int y = 0; y < 48; ++y) {
      for (int x = 32; x < 64; ++x) {
        f.u.at(x, y) = 1.75;
        f.v.at(x, y) = -0.5;
      }
    }
    const CompressedFlow c = compress_flow(f, 2, 256);
    const FlowField d = c.decompress();
    const double step_u = 1.75 / 255.0;
    for (size_t i = 0; i < f.u.size(); ++i) {
      CHECK(std::abs(d.u[i] - f.u[i]) <= step_u / 2 + 1e-6);
      CHECK(std::abs(d.v[i] - f.v[i]) <= 0.5 / 255.0 / 2 + 1e-6);
    }
  }

  TEST_CASE("compress_flow: doubling the budget lowers the error") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 5; ++t) {
      const SmoothTexture tu(100 + t), tv(200 + t);
      FlowField f(tu.render(96, 64), tv.render(96, 64));
      for (size_t i = 0; i < f.u.size(); ++i) {
        f.u[i] = (f.u[i] - 127.5) / 40.0;
        f.v[i] = (f.v[i] - 127.5) / 40.0;
      }
      double prev = 1e300;
      for (int budget : {16, 32, 64, 128, 256}) {
        const double e = flow_sse(f, compress_flow(f, budget, 256).decompress());
        if (budget >= 128) CHECK(e < prev);
        prev = e;
      }
    }
  }

  TEST_CASE("compressed flow serialization round-trips and decodes deterministically") {
    const FramePair p = two_object_pair(80, 64, 8);
    const FlowField f = flow_brox(p.frame_t, p.frame_prev);
    const CompressedFlow c = compress_flow(f, 40, 64);
    const auto bytes = c.serialize();
    const CompressedFlow q = CompressedFlow::parse(bytes, 80, 64, 64);
    CHECK(q.serialize() == bytes);
    CHECK(q.decompress() == c.decompress());
    CHECK(q.decompress() == CompressedFlow::parse(bytes, 80, 64, 64).decompress());
    auto cut = bytes;
    cut.resize(cut.size() - 1);
    CHECK_THROWS_AS(CompressedFlow::parse(cut, 80, 64, 64), DecodeError);
  }

  TEST_CASE("compress_flow argument checks") {
    CHECK_THROWS_AS(compress_flow(FlowField(8, 8), 0, 64), InvalidArgument);
    CHECK_THROWS_AS(compress_flow(FlowField(8, 8), 4, 1), InvalidArgument);
  }

  TEST_CASE("flow colour coding") {
    FlowField f(3, 1);
    f.u[1] = 1.0;
    f.v[2] = 1.0;
    const Frame c = flow_to_color(f);
    CHECK(c.space == ColorSpace::kRgb);
    CHECK(c.planes[0][0] == 255);
    CHECK(c.planes[1][0] == 255);
    CHECK(c.planes[2][0] == 255);
    auto rgb = [&](int i) {
      return std::array<int, 3>{c.planes[0][i], c.planes[1][i], c.planes[2][i]};
    };
    CHECK(rgb(1) != rgb(0));
    CHECK(rgb(2) != rgb(0));
    CHECK(rgb(1) != rgb(2));
  }
}
