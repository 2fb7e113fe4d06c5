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

#include "hivc/pseudodiff.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hivc/counters.h"
#include "hivc/error.h"
#include "hivc/parallel.h"

namespace hivc {
namespace {

double laplacian_eigenvalue_1d(int k) {
  return 2.0 - 2.0 * std::cos(k * std::numbers::pi / 8.0);
}

// Orthonormal DCT-II basis: basis[k][n].
const std::array<std::array<double, 8>, 8>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, 8>, 8> b{};
    for (int k = 0; k < 8; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        b[k][n] = alpha * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  const int m = i % period;
  return m < n ? m : period - 1 - m;
}

void check_mask_in_rect(BlockMask mask, const Rect& r, int index) {
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      if ((mask & block_bit(x, y)) && (x >= r.w || y >= r.h)) {
        throw InvalidArgument("block " + std::to_string(index) +
                              " has a mask point outside the image");
      }
    }
  }
}

void reconstruct_into(RealPlane& out, const BlockGrid& grid, int index,
                      const BlockCoefficients& coeffs,
                      const GreensKernel& kernel) {
  if (coeffs.skip()) return;  // plane is zero-initialised
  Block8 b{};
  BlockMask m = coeffs.mask;
  for (double c : coeffs.c) {
    b[std::countr_zero(m)] = c;
    m &= m - 1;
  }
  reconstruct_block_kernel(b, kernel.folded(), coeffs.a);
  const Rect r = grid.block_rect(index);
  for (int y = 0; y < r.h; ++y) {
    double* row = out.row(r.y + y) + r.x;
    for (int x = 0; x < r.w; ++x) row[x] = b[8 * y + x];
  }
}

void check_blocks(const BlockGrid& grid,
                  std::span<const BlockCoefficients> blocks) {
  if (static_cast<int>(blocks.size()) != grid.count()) {
    throw InvalidArgument("reconstruct_plane: expected " +
                          std::to_string(grid.count()) + " blocks, got " +
                          std::to_string(blocks.size()));
  }
  for (const auto& b : blocks) {
    if (std::popcount(b.mask) != b.k()) {
      throw InvalidArgument("reconstruct_plane: coefficient count mismatch");
    }
  }
}

}  // namespace

GreensEigenvalues GreensEigenvalues::harmonic() {
  GreensEigenvalues e;
  for (int q = 0; q < 8; ++q) {
    for (int p = 0; p < 8; ++p) {
      const double mu = laplacian_eigenvalue_1d(p) + laplacian_eigenvalue_1d(q);
      e.lambda[8 * q + p] = (p == 0 && q == 0) ? 0.0 : 1.0 / mu;
    }
  }
  return e;
}

GreensEigenvalues GreensEigenvalues::biharmonic() {
  GreensEigenvalues e;
  for (int q = 0; q < 8; ++q) {
    for (int p = 0; p < 8; ++p) {
      const double mu = laplacian_eigenvalue_1d(p) + laplacian_eigenvalue_1d(q);
      e.lambda[8 * q + p] = (p == 0 && q == 0) ? 0.0 : 1.0 / (mu * mu);
    }
  }
  return e;
}

GreensKernel::GreensKernel(const GreensEigenvalues& eig)
    : eig_(eig), g_(64 * 64, 0.0) {
  for (int i = 0; i < 64; ++i) folded_[i] = eig.lambda[i] / 64.0;
  const auto& c = dct_basis();
  for (int i = 0; i < 64; ++i) {
    const int yi = i / 8, xi = i % 8;
    for (int j = i; j < 64; ++j) {
      const int yj = j / 8, xj = j % 8;
      double s = 0.0;
      for (int q = 0; q < 8; ++q) {
        const double cq = c[q][yi] * c[q][yj];
        for (int p = 0; p < 8; ++p) {
          s += eig.lambda[8 * q + p] * cq * c[p][xi] * c[p][xj];
        }
      }
      g_[64 * i + j] = s;
      g_[64 * j + i] = s;
    }
  }
}

const GreensKernel& GreensKernel::harmonic() {
  static const GreensKernel kernel(GreensEigenvalues::harmonic());
  return kernel;
}

DenseMatrix neg_laplacian_dense(int width, int height) {
  const int n = width * height;
  DenseMatrix a(n, n);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int i = y * width + x;
      auto link = [&](int j) {
        a(i, i) += 1.0;
        a(i, j) -= 1.0;
      };
      if (x > 0) link(i - 1);
      if (x + 1 < width) link(i + 1);
      if (y > 0) link(i - width);
      if (y + 1 < height) link(i + width);
    }
  }
  return a;
}

DenseMatrix greens_matrix_dense(int width, int height) {
  if (width <= 0 || height <= 0 || width * height > 256) {
    throw InvalidArgument("greens_matrix_dense: size must satisfy 0 < w*h <= 256");
  }
  // For symmetric -L with null space span{1}:
  //   pinv(-L) = (-L + J/N)^-1 - J/N,  J = 1 1^T.
  const int n = width * height;
  DenseMatrix b = neg_laplacian_dense(width, height);
  const double j = 1.0 / n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) b(r, c) += j;
  }
  DenseMatrix g = lu_inverse(b);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g(r, c) -= j;
  }
  return g;
}

BlockCoefficients solve_block_coefficients(const Block8& f, BlockMask mask,
                                           const GreensKernel& kernel) {
  ++counters::block_solves;
  const int k = std::popcount(mask);
  if (k == 0) {
    throw InvalidArgument("solve_block_coefficients: empty mask");
  }
  int pos[64];
  {
    BlockMask m = mask;
    for (int i = 0; i < k; ++i) {
      pos[i] = std::countr_zero(m);
      m &= m - 1;
    }
  }
  DenseMatrix sys(k + 1, k + 1);
  std::vector<double> rhs(k + 1, 0.0);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) sys(r, c) = kernel.g(pos[r], pos[c]);
    sys(r, k) = 1.0;
    sys(k, r) = 1.0;
    rhs[r] = f[pos[r]];
  }
  std::vector<double> x;
  try {
    x = lu_solve(std::move(sys), std::move(rhs));
  } catch (const SingularSystemError&) {
    throw SingularSystemError("solve_block_coefficients: singular system for K=" +
                              std::to_string(k));
  }
  BlockCoefficients out;
  out.mask = mask;
  out.a = x[k];
  x.pop_back();
  out.c = std::move(x);
  return out;
}

Block8 reconstruct_block(const BlockCoefficients& coeffs,
                         const GreensKernel& kernel) {
  Block8 b{};
  if (coeffs.skip()) return b;
  if (std::popcount(coeffs.mask) != coeffs.k()) {
    throw InvalidArgument("reconstruct_block: coefficient count mismatch");
  }
  BlockMask m = coeffs.mask;
  for (double c : coeffs.c) {
    b[std::countr_zero(m)] = c;
    m &= m - 1;
  }
  reconstruct_block_kernel(b, kernel.folded(), coeffs.a);
  return b;
}

std::vector<double> evaluate_at_mask(const BlockCoefficients& coeffs,
                                     const GreensKernel& kernel) {
  std::vector<int> pos;
  for (BlockMask m = coeffs.mask; m; m &= m - 1) pos.push_back(std::countr_zero(m));
  std::vector<double> out(pos.size(), coeffs.a);
  for (size_t r = 0; r < pos.size(); ++r) {
    for (size_t c = 0; c < pos.size(); ++c) {
      out[r] += kernel.g(pos[r], pos[c]) * coeffs.c[c];
    }
  }
  return out;
}

Rect BlockGrid::block_rect(int index) const {
  const int bx = index % blocks_x();
  const int by = index / blocks_x();
  const int x = 8 * bx;
  const int y = 8 * by;
  return {x, y, std::min(8, width - x), std::min(8, height - y)};
}

Block8 extract_block(const IntPlane& plane, const BlockGrid& grid, int index) {
  const Rect r = grid.block_rect(index);
  Block8 b{};
  for (int y = 0; y < 8; ++y) {
    const int py = r.y + reflect_index(y, r.h);
    for (int x = 0; x < 8; ++x) {
      b[8 * y + x] = plane.at(r.x + reflect_index(x, r.w), py);
    }
  }
  return b;
}

BlockwiseResult inpaint_plane_blockwise(const ResidualPlane& residual,
                                        std::span<const BlockMask> masks,
                                        const GreensKernel& kernel) {
  const BlockGrid grid(residual.width(), residual.height());
  if (static_cast<int>(masks.size()) != grid.count()) {
    throw InvalidArgument("inpaint_plane_blockwise: one mask per block needed");
  }
  BlockwiseResult out;
  out.blocks.resize(grid.count());
  const int n = grid.count();
  for (int i = 0; i < n; ++i) check_mask_in_rect(masks[i], grid.block_rect(i), i);
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    if (masks[i] == 0) continue;
    errors.capture(i, [&] {
      out.blocks[i] = solve_block_coefficients(extract_block(residual, grid, i),
                                               masks[i], kernel);
    });
  }
  errors.rethrow_if_any();
  out.reconstruction = reconstruct_plane(grid, out.blocks, kernel);
  return out;
}

RealPlane reconstruct_plane(const BlockGrid& grid,
                            std::span<const BlockCoefficients> blocks,
                            const GreensKernel& kernel) {
  check_blocks(grid, blocks);
  RealPlane out(grid.width, grid.height, 0.0);
  const int n = grid.count();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) reconstruct_into(out, grid, i, blocks[i], kernel);
  return out;
}

RealPlane reconstruct_plane_serial(const BlockGrid& grid,
                                   std::span<const BlockCoefficients> blocks,
                                   const GreensKernel& kernel) {
  check_blocks(grid, blocks);
  RealPlane out(grid.width, grid.height, 0.0);
  for (int i = 0; i < grid.count(); ++i) {
    reconstruct_into(out, grid, i, blocks[i], kernel);
  }
  return out;
}

}  // namespace hivc
