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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "hivc/error.h"
#include "hivc/homogeneous.h"
#include "hivc/synthetic.h"
#include "test_util.h"

using namespace hivc;

namespace {

InpaintingMask random_mask(int w, int h, double density, std::mt19937_64& rng) {
  InpaintingMask m(w, h);
  std::bernoulli_distribution d(density);
  for (size_t i = 0; i < m.size(); ++i) m.set(i, d(rng));
  if (m.count() == 0) m.set(static_cast<size_t>(rng() % m.size()));
  return m;
}

// Literal assembly of M (u - f) - (I - M) A u = 0 with A = -L.
RealPlane dense_solve(const RealPlane& f, const InpaintingMask& m) {
  const int w = f.width();
  const int h = f.height();
  const Eigen::MatrixXd a = test::neg_laplacian(w, h);
  const int n = w * h;
  Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd fv(n);
  for (int i = 0; i < n; ++i) {
    mm(i, i) = m.test(static_cast<size_t>(i)) ? 1.0 : 0.0;
    fv[i] = f[i];
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd sys = mm - (id - mm) * a;
  const Eigen::VectorXd u = sys.fullPivLu().solve(mm * fv);
  RealPlane out(w, h);
  for (int i = 0; i < n; ++i) out[i] = u[i];
  return out;
}

}  // namespace

TEST_SUITE("homogeneous") {
  TEST_CASE("Laplacian matches the dense operator and the serial reference") {
    std::mt19937_64 rng(41);
    for (auto [w, h] : {std::pair{1, 1}, {1, 9}, {7, 1}, {5, 6}, {13, 11}}) {
      const RealPlane u = test::random_plane(w, h, rng);
      const RealPlane lu = apply_laplacian(u);
      CHECK(lu == apply_laplacian_serial(u));
      Eigen::VectorXd uv(w * h);
      for (int i = 0; i < w * h; ++i) uv[i] = u[i];
      const Eigen::VectorXd ref = -(test::neg_laplacian(w, h) * uv);
      for (int i = 0; i < w * h; ++i) CHECK(std::abs(lu[i] - ref[i]) <= 1e-9);
    }
    const RealPlane big = test::random_plane(301, 203, rng);
    CHECK(apply_laplacian(big) == apply_laplacian_serial(big));
  }

  TEST_CASE("Laplacian rows sum to zero") {
    const RealPlane c(9, 4, 17.25);
    const RealPlane lc = apply_laplacian(c);
    for (size_t i = 0; i < lc.size(); ++i) CHECK(lc[i] == 0.0);
  }

  TEST_CASE("operator: constants, full mask, 3x3 impulse") {
    std::mt19937_64 rng(42);
    const RealPlane c(6, 5, 3.0);
    const RealPlane r0 = apply_inpainting_operator(c, random_mask(6, 5, 0.3, rng), c);
    for (size_t i = 0; i < r0.size(); ++i) CHECK(r0[i] == 0.0);

    InpaintingMask full(6, 5);
    for (size_t i = 0; i < full.size(); ++i) full.set(i);
    const RealPlane u = test::random_plane(6, 5, rng);
    const RealPlane f = test::random_plane(6, 5, rng);
    const RealPlane r1 = apply_inpainting_operator(u, full, f);
    for (size_t i = 0; i < r1.size(); ++i) CHECK(r1[i] == doctest::Approx(u[i] - f[i]));

    RealPlane imp(3, 3);
    imp.at(1, 1) = 1.0;
    InpaintingMask centre(3, 3);
    centre.set(1, 1);
    const RealPlane r2 = apply_inpainting_operator(imp, centre, imp);
    // Dense oracle: r = M (u - f) - (I - M) A u.
    const Eigen::MatrixXd a = test::neg_laplacian(3, 3);
    Eigen::VectorXd uv = Eigen::VectorXd::Zero(9);
    uv[4] = 1.0;
    const Eigen::VectorXd au = a * uv;
    for (int i = 0; i < 9; ++i) {
      const double expect = i == 4 ? 0.0 : -au[i];
      CHECK(r2[i] == doctest::Approx(expect));
    }
    CHECK(r2.at(1, 0) == 1.0);
    CHECK(r2.at(0, 1) == 1.0);
    CHECK(r2.at(0, 0) == 0.0);
  }

  TEST_CASE("operator errors") {
    InpaintingMask m(4, 4);
    m.set(0, 0);
    CHECK_THROWS_AS(apply_inpainting_operator(RealPlane(4, 4), m, RealPlane(4, 5)),
                    InvalidArgument);
    CHECK_THROWS_AS(apply_inpainting_operator(RealPlane(4, 4), InpaintingMask(4, 4),
                                              RealPlane(4, 4)),
                    InvalidArgument);
    CHECK_THROWS_AS(solve_homogeneous(RealPlane(4, 4), InpaintingMask(4, 4), 1e-6, 100),
                    InvalidArgument);
    CHECK_THROWS_AS(solve_homogeneous(RealPlane(4, 4), m, 0.0, 100), InvalidArgument);
  }

  TEST_CASE("pyramid shapes and coarsening") {
    std::mt19937_64 rng(43);
    CHECK(build_pyramid(RealPlane(16, 16), random_mask(16, 16, 0.1, rng)).size() == 1);
    const auto p32 = build_pyramid(RealPlane(32, 32), random_mask(32, 32, 0.1, rng));
    REQUIRE(p32.size() == 2);
    CHECK(p32[1].values.width() == 16);

    const auto p = build_pyramid(RealPlane(67, 35, 9.5), random_mask(67, 35, 0.05, rng));
    REQUIRE(p.size() == 4);
    CHECK(p[1].values.width() == 34);
    CHECK(p[1].values.height() == 18);
    CHECK(p[3].values.width() == 9);
    CHECK(p[3].values.height() == 5);
    for (const auto& lv : p) {
      for (size_t i = 0; i < lv.values.size(); ++i) CHECK(lv.values[i] == doctest::Approx(9.5));
    }

    // Coarse mask bit iff any child set; value = mean of set children.
    RealPlane f(32, 20);
    for (size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i % 97);
    const InpaintingMask m = random_mask(32, 20, 0.3, rng);
    const auto q = build_pyramid(f, m);
    REQUIRE(q.size() == 2);
    for (int y = 0; y < 10; ++y) {
      for (int x = 0; x < 16; ++x) {
        int set = 0;
        double sum = 0.0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            if (m.test(2 * x + dx, 2 * y + dy)) {
              ++set;
              sum += f.at(2 * x + dx, 2 * y + dy);
            }
          }
        }
        CHECK(q[1].mask.test(x, y) == (set > 0));
        if (set > 0) CHECK(q[1].values.at(x, y) == doctest::Approx(sum / set));
      }
    }
    // Mask survives coarsening.
    for (const auto& lv : q) CHECK(lv.mask.count() > 0);
  }

  TEST_CASE("solver: full mask and single point") {
    std::mt19937_64 rng(44);
    const RealPlane f = test::random_plane(40, 30, rng);
    InpaintingMask full(40, 30);
    for (size_t i = 0; i < full.size(); ++i) full.set(i);
    CHECK(solve_homogeneous(f, full, 1e-8, 1000) == f);

    InpaintingMask one(40, 30);
    one.set(13, 7);
    RealPlane g(40, 30);
    g.at(13, 7) = 77.0;
    const RealPlane u = solve_homogeneous(g, one, 1e-10, 20000);
    for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - 77.0) <= 1e-6);
  }

  TEST_CASE("solver: two opposite corners of 8x8 match the dense solve") {
    RealPlane f(8, 8);
    f.at(7, 7) = 255.0;
    InpaintingMask m(8, 8);
    m.set(0, 0);
    m.set(7, 7);
    const RealPlane u = solve_homogeneous(f, m, 1e-10, 20000);
    CHECK(test::rms_diff(u, dense_solve(f, m)) <= 1e-6);
  }

  TEST_CASE("solver matches dense oracle on random planes up to 12x12") {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<int> dim(1, 12);
    std::uniform_real_distribution<double> dens(0.02, 0.6);
    for (int t = 0; t < 60; ++t) {
      const int w = dim(rng);
      const int h = dim(rng);
      const RealPlane f = test::random_plane(w, h, rng);
      const InpaintingMask m = random_mask(w, h, dens(rng), rng);
      const RealPlane u = solve_homogeneous(f, m, 1e-10, 20000);
      CHECK(test::rms_diff(u, dense_solve(f, m)) <= 1e-5);
    }
  }

  TEST_CASE("interpolation and maximum principle") {
    std::mt19937_64 rng(46);
    for (int t = 0; t < 8; ++t) {
      const RealPlane f = test::random_plane(97, 61, rng);
      const InpaintingMask m = random_mask(97, 61, 0.04, rng);
      const double tol = 1e-7;
      SolveStats stats;
      CascadicOptions opt;
      opt.tolerance = tol;
      const RealPlane u = solve_homogeneous(f, m, opt, &stats);
      CHECK(stats.converged);
      CHECK(stats.levels.back().relative_residual <= tol);
      double lo = 1e300, hi = -1e300, fmax = 0.0;
      for (size_t i = 0; i < f.size(); ++i) {
        if (!m.test(i)) continue;
        lo = std::min(lo, f[i]);
        hi = std::max(hi, f[i]);
        fmax = std::max(fmax, std::abs(f[i]));
      }
      for (size_t i = 0; i < u.size(); ++i) {
        if (m.test(i)) CHECK(std::abs(u[i] - f[i]) <= 10.0 * tol * fmax);
        CHECK(u[i] >= lo - 1e-3);
        CHECK(u[i] <= hi + 1e-3);
      }
    }
  }

  TEST_CASE("non-convergence is reported") {
    std::mt19937_64 rng(47);
    const RealPlane f = test::random_plane(64, 64, rng);
    const InpaintingMask m = random_mask(64, 64, 0.01, rng);
    CHECK_THROWS_AS(solve_homogeneous(f, m, 1e-12, 2), ConvergenceError);
    CascadicOptions opt;
    opt.tolerance = 1e-12;
    opt.max_iterations = 2;
    opt.throw_on_failure = false;
    SolveStats stats;
    solve_homogeneous(f, m, opt, &stats);
    CHECK_FALSE(stats.converged);
  }

  TEST_CASE("cascadic scheme beats single-level CG") {
    const Video clip = synthetic_clip(256, 256, 1, 5);
    const RealPlane f = to_real(rct_forward(clip.frames[0]).planes[0]);
    std::mt19937_64 rng(48);
    const InpaintingMask m = random_mask(256, 256, 0.05, rng);
    SolveStats cascade;
    CascadicOptions opt;
    opt.tolerance = 1e-6;
    opt.max_iterations = 100000;
    solve_homogeneous(f, m, opt, &cascade);
    LevelSolveStats single;
    RealPlane zero(256, 256);
    solve_homogeneous_single_level(f, m, zero, 1e-6, 100000, &single);
    MESSAGE("cascadic weighted iterations ", cascade.weighted_iterations(),
            " single-level ", single.iterations);
    CHECK(cascade.weighted_iterations() < single.iterations);
  }
}
