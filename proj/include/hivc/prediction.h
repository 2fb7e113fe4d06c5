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

#ifndef HIVC_PREDICTION_H_
#define HIVC_PREDICTION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hivc/homogeneous.h"
#include "hivc/image.h"
#include "hivc/subdivision.h"
#include "hivc/warp.h"

namespace hivc {

// Frame roles inside a group of pictures: index 0 is intra, the rest inter.
struct GopStructure {
  int gop_size = 16;

  explicit GopStructure(int size);
  bool is_intra(long long frame) const { return frame % gop_size == 0; }
  long long gop_of(long long frame) const { return frame / gop_size; }
};

// Solver settings for intra decoding. Encoder and decoder share them, so the
// result is deterministic; the iteration cap bounds decode time.
CascadicOptions intra_solver_options();

struct IntraParams {
  long long luma_points = 1;   // K, mask points for Y
  double chroma_ratio = 0.5;   // chroma points = ceil(K * ratio), shared U/V
  int levels = 256;            // uniform quantizer levels for stored values
  // Store each leaf's mean instead of the pixel at its mask point (used by
  // the piecewise-constant baseline).
  bool leaf_means = false;
  // Encoder-side refinement of the stored values: each pass inpaints and
  // adds the mean error over every leaf to its value.
  int tonal_iterations = 0;
  // Mask refinement rounds driven by the actual inpainting error; 0 uses
  // the mean-deviation proxy alone.
  int mask_rounds = 0;
};

struct IntraChannel {
  int lo = 0;
  int hi = 0;
  std::vector<int32_t> indices;  // preorder leaves of the channel's tree
};

// Everything an intra payload stores.
struct IntraData {
  int width = 0;
  int height = 0;
  SubdivisionTree luma_tree;
  SubdivisionTree chroma_tree;  // unused for one-channel frames
  std::vector<IntraChannel> channels;

  // [i16 lo][i16 hi] per channel, [u32 len][tree bits: luma, chroma],
  // [integer payload: DPCM over the Y, U, V indices in order]
  std::vector<uint8_t> serialize() const;
  static IntraData parse(std::span<const uint8_t> bytes, int width, int height,
                         int channels, int levels);
};

// Mask selection and value quantization on a YUV (or gray) frame.
IntraData analyze_intra(const Frame& frame, const IntraParams& params);

// Decoder path: dequantized mask values inpainted per channel, rounded and
// clamped to the channel range.
Frame decode_intra(const IntraData& data, int levels, ColorSpace space,
                   SolveStats* luma_stats = nullptr);

// Same trees and values painted as piecewise-constant regions (leaf value
// everywhere in the leaf); the comparison baseline.
Frame decode_intra_piecewise(const IntraData& data, int levels,
                             ColorSpace space);

struct IntraPrediction {
  Frame prediction;
  std::vector<uint8_t> payload;
};

// analyze_intra + serialize, then the decoder path on the parsed payload so
// the encoder predicts exactly what the decoder will.
IntraPrediction predict_intra(const Frame& frame, const IntraParams& params);

// Per channel: bilinear backward warp of the previous reconstruction,
// rounded and clamped to the channel range.
Frame predict_inter(const Frame& prev_reconstruction, const FlowField& flow);

}  // namespace hivc

#endif  // HIVC_PREDICTION_H_
