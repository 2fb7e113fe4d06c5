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

#ifndef HIVC_PSEUDODIFF_H_
#define HIVC_PSEUDODIFF_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hivc/dct.h"
#include "hivc/dense.h"
#include "hivc/image.h"

namespace hivc {

// Bit y * 8 + x marks a mask point inside an 8x8 block.
using BlockMask = uint64_t;

inline BlockMask block_bit(int x, int y) { return BlockMask{1} << (8 * y + x); }

// Eigenvalues of the Green's function matrix of an 8x8 block under the
// orthonormal DCT-II, indexed [8 * q + p] for horizontal frequency p and
// vertical frequency q. The constant mode is zero (pseudo-inverse).
struct GreensEigenvalues {
  std::array<double, 64> lambda{};

  // Reflecting-boundary Laplacian: 1 / ((2 - 2cos(p pi/8)) + (2 - 2cos(q pi/8))).
  static GreensEigenvalues harmonic();
  // Squared operator: reciprocal of the squared Laplacian eigenvalue.
  static GreensEigenvalues biharmonic();
};

// Everything the block coder needs for one operator: the eigenvalues, the
// same eigenvalues folded with the AAN output scaling (lambda / 64), and the
// dense 64x64 matrix C^T diag(lambda) C used by the encoder's block systems.
class GreensKernel {
 public:
  explicit GreensKernel(const GreensEigenvalues& eig);

  const GreensEigenvalues& eigenvalues() const { return eig_; }
  const std::array<double, 64>& folded() const { return folded_; }
  double g(int i, int j) const { return g_[64 * i + j]; }

  static const GreensKernel& harmonic();

 private:
  GreensEigenvalues eig_;
  std::array<double, 64> folded_{};
  std::vector<double> g_;
};

// Coefficients of one 8x8 block: u = G M c + a. `c` is ordered by increasing
// bit index of `mask`. An empty mask marks a skip block (all-zero output).
struct BlockCoefficients {
  BlockMask mask = 0;
  std::vector<double> c;
  double a = 0.0;

  int k() const { return static_cast<int>(c.size()); }
  bool skip() const { return mask == 0; }
  friend bool operator==(const BlockCoefficients&,
                         const BlockCoefficients&) = default;
};

// Dense -L (5-point, reflecting boundaries) for a width x height image,
// pixels in row-major order.
DenseMatrix neg_laplacian_dense(int width, int height);

// Moore-Penrose pseudo-inverse of neg_laplacian_dense, i.e. the matrix whose
// columns are the discrete Green's functions. Limited to width * height <= 256.
DenseMatrix greens_matrix_dense(int width, int height);

// Solves the (K+1) x (K+1) bordered system
//   [G_MM 1; 1^T 0] [c; a] = [f_M; 0]
// so that G M c + a interpolates f at the mask points and sum(c) = 0.
BlockCoefficients solve_block_coefficients(const Block8& f, BlockMask mask,
                                           const GreensKernel& kernel);

// Decoder path: scatter c, one forward DCT, multiply by the eigenvalues, one
// inverse DCT, add a. Both transforms are the raw AAN kernels.
template <typename T>
inline void reconstruct_block_kernel(std::array<T, 64>& block,
                                     const std::array<T, 64>& folded,
                                     const T& a) {
  aan::forward_8x8(block);
  for (int i = 0; i < 64; ++i) block[i] = block[i] * folded[i];
  aan::inverse_8x8(block);
  for (int i = 0; i < 64; ++i) block[i] = block[i] + a;
}

Block8 reconstruct_block(const BlockCoefficients& coeffs,
                         const GreensKernel& kernel);

// G M c + a evaluated at the mask points only, using the dense kernel.
std::vector<double> evaluate_at_mask(const BlockCoefficients& coeffs,
                                     const GreensKernel& kernel);

// Layout of 8x8 blocks over a plane; edge blocks are cropped.
struct BlockGrid {
  int width = 0;
  int height = 0;

  BlockGrid() = default;
  BlockGrid(int w, int h) : width(w), height(h) {}
  int blocks_x() const { return (width + 7) / 8; }
  int blocks_y() const { return (height + 7) / 8; }
  int count() const { return blocks_x() * blocks_y(); }
  Rect block_rect(int index) const;
};

// Reads block `index` of a plane, reflect-padding edge blocks to 8x8.
Block8 extract_block(const IntPlane& plane, const BlockGrid& grid, int index);

struct BlockwiseResult {
  std::vector<BlockCoefficients> blocks;
  RealPlane reconstruction;
};

// Independent per-block fit and reconstruction. masks[i] must only contain
// bits inside the true (uncropped) part of block i; an empty mask gives a
// skip block.
BlockwiseResult inpaint_plane_blockwise(const ResidualPlane& residual,
                                        std::span<const BlockMask> masks,
                                        const GreensKernel& kernel);

// Assembles a plane from per-block coefficients, cropping edge blocks.
// The OpenMP version distributes blocks over threads; the serial version is
// the reference it is tested against.
RealPlane reconstruct_plane(const BlockGrid& grid,
                            std::span<const BlockCoefficients> blocks,
                            const GreensKernel& kernel);
RealPlane reconstruct_plane_serial(const BlockGrid& grid,
                                   std::span<const BlockCoefficients> blocks,
                                   const GreensKernel& kernel);

}  // namespace hivc

#endif  // HIVC_PSEUDODIFF_H_
