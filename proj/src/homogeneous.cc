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

#include "hivc/homogeneous.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hivc/error.h"
#include "hivc/parallel.h"

namespace hivc {
namespace {

constexpr int kCoarsestSize = 16;

// Computes out = (L u) for one row with reflecting boundaries.
inline void laplacian_row(const RealPlane& u, int y, double* out) {
  const int w = u.width();
  const int h = u.height();
  const double* row = u.row(y);
  const double* up = y > 0 ? u.row(y - 1) : nullptr;
  const double* down = y + 1 < h ? u.row(y + 1) : nullptr;
  for (int x = 0; x < w; ++x) {
    const double c = row[x];
    double s = 0.0;
    if (x > 0) s += row[x - 1] - c;
    if (x + 1 < w) s += row[x + 1] - c;
    if (up) s += up[x] - c;
    if (down) s += down[x] - c;
    out[x] = s;
  }
}

void check_shapes(const RealPlane& f, const InpaintingMask& mask) {
  if (f.width() != mask.width() || f.height() != mask.height()) {
    throw InvalidArgument("inpainting: plane and mask dimensions differ");
  }
  if (f.empty()) throw InvalidArgument("inpainting: empty plane");
  if (mask.count() == 0) throw InvalidArgument("inpainting: empty mask");
}

double mask_norm(const RealPlane& f, const InpaintingMask& mask) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    if (mask.test(i)) s += f[i] * f[i];
  }
  return std::sqrt(s);
}

// CG on the unknown (non-mask) pixels of -L u = 0 with the mask pixels of u
// held fixed. `u` holds the initial guess and receives the solution.
LevelSolveStats conjugate_gradient(RealPlane& u, const InpaintingMask& mask,
                                   double denom, double tolerance,
                                   int max_iterations) {
  const int w = u.width();
  const int h = u.height();
  const size_t n = u.size();
  LevelSolveStats stats;
  stats.width = w;
  stats.height = h;

  RealPlane r = apply_laplacian(u);
  for (size_t i = 0; i < n; ++i) {
    if (mask.test(i)) r[i] = 0.0;
  }
  RealPlane p = r;
  RealPlane q(w, h);
  double rr = deterministic_dot(r.values(), r.values());
  const double target = tolerance * (denom > 0.0 ? denom : 1.0);

  int it = 0;
  while (std::sqrt(rr) > target && it < max_iterations) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
      double* qrow = q.row(y);
      laplacian_row(p, y, qrow);
      const size_t base = static_cast<size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        qrow[x] = mask.test(base + x) ? 0.0 : -qrow[x];
      }
    }
    const double pq = deterministic_dot(p.values(), q.values());
    if (pq <= 0.0) break;
    const double alpha = rr / pq;
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rr_new = deterministic_dot(r.values(), r.values());
    const double beta = rr_new / rr;
    rr = rr_new;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) p[i] = r[i] + beta * p[i];
    ++it;
  }
  stats.iterations = it;
  stats.relative_residual = std::sqrt(rr) / (denom > 0.0 ? denom : 1.0);
  return stats;
}

// Bilinear interpolation of a coarse level onto the next finer grid.
RealPlane prolongate(const RealPlane& coarse, int width, int height) {
  RealPlane fine(width, height);
  const int cw = coarse.width();
  const int ch = coarse.height();
  for (int y = 0; y < height; ++y) {
    const double cy = std::clamp(0.5 * y - 0.25, 0.0, ch - 1.0);
    const int y0 = static_cast<int>(cy);
    const int y1 = std::min(y0 + 1, ch - 1);
    const double fy = cy - y0;
    for (int x = 0; x < width; ++x) {
      const double cx = std::clamp(0.5 * x - 0.25, 0.0, cw - 1.0);
      const int x0 = static_cast<int>(cx);
      const int x1 = std::min(x0 + 1, cw - 1);
      const double fx = cx - x0;
      const double top =
          coarse.at(x0, y0) + fx * (coarse.at(x1, y0) - coarse.at(x0, y0));
      const double bottom =
          coarse.at(x0, y1) + fx * (coarse.at(x1, y1) - coarse.at(x0, y1));
      fine.at(x, y) = top + fy * (bottom - top);
    }
  }
  return fine;
}

void impose_mask(RealPlane& u, const RealPlane& f, const InpaintingMask& mask) {
  for (size_t i = 0; i < u.size(); ++i) {
    if (mask.test(i)) u[i] = f[i];
  }
}

LevelSolveStats solve_level(RealPlane& u, const RealPlane& f,
                            const InpaintingMask& mask, double tolerance,
                            int max_iterations) {
  impose_mask(u, f, mask);
  if (mask.full()) {
    LevelSolveStats s;
    s.width = u.width();
    s.height = u.height();
    return s;
  }
  return conjugate_gradient(u, mask, mask_norm(f, mask), tolerance,
                            max_iterations);
}

}  // namespace

size_t InpaintingMask::count() const {
  size_t n = 0;
  for (uint8_t b : bits_.values()) n += b != 0;
  return n;
}

RealPlane apply_laplacian(const RealPlane& u) {
  RealPlane out(u.width(), u.height());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < u.height(); ++y) laplacian_row(u, y, out.row(y));
  return out;
}

RealPlane apply_laplacian_serial(const RealPlane& u) {
  RealPlane out(u.width(), u.height());
  for (int y = 0; y < u.height(); ++y) laplacian_row(u, y, out.row(y));
  return out;
}

RealPlane apply_inpainting_operator(const RealPlane& u,
                                    const InpaintingMask& mask,
                                    const RealPlane& f) {
  if (!u.same_shape(f)) {
    throw InvalidArgument("apply_inpainting_operator: u and f differ in size");
  }
  check_shapes(f, mask);
  RealPlane r = apply_laplacian(u);
  for (size_t i = 0; i < r.size(); ++i) {
    if (mask.test(i)) r[i] = u[i] - f[i];
  }
  return r;
}

std::vector<PyramidLevel> build_pyramid(const RealPlane& f,
                                        const InpaintingMask& mask) {
  if (!f.same_shape(Plane<uint8_t>(mask.width(), mask.height()))) {
    throw InvalidArgument("build_pyramid: plane and mask dimensions differ");
  }
  std::vector<PyramidLevel> levels;
  levels.push_back({f, mask});
  while (std::max(levels.back().values.width(),
                  levels.back().values.height()) > kCoarsestSize) {
    const PyramidLevel& fine = levels.back();
    const int fw = fine.values.width();
    const int fh = fine.values.height();
    const int cw = (fw + 1) / 2;
    const int ch = (fh + 1) / 2;
    PyramidLevel coarse{RealPlane(cw, ch), InpaintingMask(cw, ch)};
    for (int y = 0; y < ch; ++y) {
      for (int x = 0; x < cw; ++x) {
        double all_sum = 0.0, mask_sum = 0.0;
        int all_n = 0, mask_n = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int fx = 2 * x + dx;
            const int fy = 2 * y + dy;
            if (fx >= fw || fy >= fh) continue;
            const double v = fine.values.at(fx, fy);
            all_sum += v;
            ++all_n;
            if (fine.mask.test(fx, fy)) {
              mask_sum += v;
              ++mask_n;
            }
          }
        }
        if (mask_n > 0) {
          coarse.mask.set(x, y);
          coarse.values.at(x, y) = mask_sum / mask_n;
        } else {
          coarse.values.at(x, y) = all_sum / all_n;
        }
      }
    }
    levels.push_back(std::move(coarse));
  }
  return levels;
}

double SolveStats::weighted_iterations() const {
  if (levels.empty()) return 0.0;
  const double finest =
      static_cast<double>(levels.back().width) * levels.back().height;
  double total = 0.0;
  for (const auto& l : levels) {
    total += l.iterations * (static_cast<double>(l.width) * l.height) / finest;
  }
  return total;
}

RealPlane solve_homogeneous(const RealPlane& f, const InpaintingMask& mask,
                            const CascadicOptions& options, SolveStats* stats) {
  check_shapes(f, mask);
  if (options.tolerance <= 0.0) {
    throw InvalidArgument("solve_homogeneous: tolerance must be positive");
  }
  const std::vector<PyramidLevel> pyramid = build_pyramid(f, mask);
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  st = SolveStats{};

  // Coarsest level starts from the mean of the known values.
  const PyramidLevel& coarsest = pyramid.back();
  double mean = 0.0;
  size_t k = 0;
  for (size_t i = 0; i < coarsest.values.size(); ++i) {
    if (coarsest.mask.test(i)) {
      mean += coarsest.values[i];
      ++k;
    }
  }
  mean /= static_cast<double>(k);
  RealPlane u(coarsest.values.width(), coarsest.values.height(), mean);

  for (size_t li = pyramid.size(); li-- > 0;) {
    const PyramidLevel& level = pyramid[li];
    if (li + 1 < pyramid.size()) {
      u = prolongate(u, level.values.width(), level.values.height());
    }
    const double tol = li == 0 ? options.tolerance : options.coarse_tolerance;
    const LevelSolveStats ls =
        solve_level(u, level.values, level.mask, tol, options.max_iterations);
    st.levels.push_back(ls);
    if (ls.relative_residual > tol) {
      st.converged = false;
      if (options.throw_on_failure) {
        throw ConvergenceError(
            "solve_homogeneous: no convergence on level " +
                std::to_string(li) + " after " + std::to_string(ls.iterations) +
                " iterations",
            ls.iterations, ls.relative_residual);
      }
    }
  }
  return u;
}

RealPlane solve_homogeneous(const RealPlane& f, const InpaintingMask& mask,
                            double tolerance, int max_iterations) {
  CascadicOptions o;
  o.tolerance = tolerance;
  o.coarse_tolerance = std::max(tolerance, 1e-4);
  o.max_iterations = max_iterations;
  return solve_homogeneous(f, mask, o);
}

RealPlane solve_homogeneous_single_level(const RealPlane& f,
                                         const InpaintingMask& mask,
                                         const RealPlane& initial,
                                         double tolerance, int max_iterations,
                                         LevelSolveStats* stats) {
  check_shapes(f, mask);
  if (!initial.same_shape(f)) {
    throw InvalidArgument("solve_homogeneous_single_level: bad initial guess");
  }
  RealPlane u = initial;
  const LevelSolveStats ls = solve_level(u, f, mask, tolerance, max_iterations);
  if (stats) *stats = ls;
  if (ls.relative_residual > tolerance) {
    throw ConvergenceError("solve_homogeneous_single_level: no convergence",
                           ls.iterations, ls.relative_residual);
  }
  return u;
}

}  // namespace hivc
