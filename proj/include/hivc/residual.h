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

#ifndef HIVC_RESIDUAL_H_
#define HIVC_RESIDUAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hivc/image.h"
#include "hivc/pseudodiff.h"

namespace hivc {

struct ResidualParams {
  double points_per_block = 2.0;  // average luma mask points per 8x8 block
  double chroma_ratio = 0.5;      // chroma points = ceil(luma * ratio)
  int levels = 255;               // dead-zone levels for c and a
  // Coded blocks must reduce the squared error by at least this much per
  // estimated bit; 0 keeps every block.
  double rd_lambda = 0.0;
};

// Dequantized per-block coefficients of one residual payload.
struct ResidualData {
  int width = 0;
  int height = 0;
  // 16.16 fixed point; both zero in integer mode (c stored as integers,
  // a in 1/64 units, 256 levels only).
  uint32_t scale_c = 0;
  uint32_t scale_a = 0;
  std::vector<std::vector<BlockCoefficients>> channels;

  static ResidualData parse(std::span<const uint8_t> bytes, int width,
                            int height, int channels, int levels);
};

// Residual payload layout:
//   [u32 scale_c][u32 scale_a]
//   [integers: luma skip runs][integers: chroma skip runs]
//     (run i = skipped blocks before the i-th coded block)
//   [u32 len][bits: trees of the coded luma blocks, then of the coded chroma
//             blocks, the chroma tree shared by U and V]
//   [integers: quantized c of every coded block with K >= 2, Y then U then V]
//   [integers: quantized a of every coded block, Y then U then V]
// Mask points sit at the leaf points of the block trees; a K = 1 block
// stores only a.
std::vector<uint8_t> encode_residual(std::span<const ResidualPlane> residual,
                                     const ResidualParams& params,
                                     const GreensKernel& kernel);

// Block DCT reconstruction of every channel.
std::vector<RealPlane> reconstruct_residual(const ResidualData& data,
                                            const GreensKernel& kernel);

// clamp(prediction + round(residual)) per channel.
Frame apply_residual(const Frame& prediction,
                     std::span<const RealPlane> residual);

// original - prediction.
std::vector<ResidualPlane> compute_residual(const Frame& original,
                                            const Frame& prediction);

}  // namespace hivc

#endif  // HIVC_RESIDUAL_H_
