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

#ifndef HIVC_CODEC_H_
#define HIVC_CODEC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hivc/bitstream.h"
#include "hivc/error.h"
#include "hivc/flow.h"
#include "hivc/image.h"
#include "hivc/io.h"

namespace hivc {

enum class FlowMethod { kBrox, kHornSchunck };

struct EncoderConfig {
  int gop_size = 16;
  // Luma intra mask points as a fraction of the pixels.
  double intra_density = 0.08;
  // Chroma mask points relative to luma, for intra masks and residuals.
  double chroma_ratio = 0.5;
  // Flow leaves per component as a fraction of the pixels.
  double flow_density = 0.002;
  // Average luma residual mask points per 8x8 block.
  double residual_points = 1.0;
  // Encoder-side refinement passes for the stored intra values.
  int tonal_iterations = 3;
  // Intra mask refinement rounds against the actual inpainting error.
  int intra_mask_rounds = 4;
  // Residual blocks must buy this much squared error per estimated bit.
  double residual_rd_lambda = 15.0;
  int intra_levels = 128;
  int flow_levels = 64;
  int residual_levels = 31;
  FlowMethod flow_method = FlowMethod::kBrox;
  BroxParams brox;
  double hs_alpha = 10.0;
  int hs_iterations = 400;
  // > 0 engages rate control: all budgets are scaled by one multiplier
  // found by bisection so that raw RGB bytes / stream bytes ~ target_ratio.
  double target_ratio = 0.0;
  double ratio_tolerance = 0.02;

  void validate() const;
};

// Budgets after applying the rate-control multiplier.
struct Budgets {
  long long intra_points = 1;
  int flow_leaves = 1;
  double residual_points = 0.0;
};
Budgets budgets_for(const EncoderConfig& cfg, int width, int height,
                    double multiplier);

struct EncodeStats {
  double multiplier = 1.0;
  int rate_iterations = 0;
  double flow_seconds = 0.0;
  double encode_seconds = 0.0;
  size_t intra_bytes = 0;
  size_t flow_bytes = 0;
  size_t residual_bytes = 0;
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  std::vector<Frame> reconstruction;  // RGB, what the decoder must produce
  EncodeStats stats;
};

// Frames are RGB with identical sizes; fps goes into the header.
EncodeResult encode(const Video& video, const EncoderConfig& cfg);
// Same, reusing flows from estimate_flows (they depend only on the frames,
// the GOP size and the flow settings).
EncodeResult encode(const Video& video, const EncoderConfig& cfg,
                    const std::vector<FlowField>& flows);

// Raw RGB bytes (3 w h frames) over stream bytes.
double compression_ratio(const VideoInfo& info, size_t frames, size_t bytes);

// Encoder-only flow step, exposed for the rate-control cache and tests:
// flows[t] is the backward flow from frame t to t - 1 (empty for intra
// frames).
std::vector<FlowField> estimate_flows(const std::vector<Frame>& yuv,
                                      const EncoderConfig& cfg);

struct DecodeStats {
  double intra_parse = 0.0;
  double intra_solve = 0.0;
  double flow_parse = 0.0;
  double warp = 0.0;
  double residual_parse = 0.0;
  double residual_dct = 0.0;
  double color = 0.0;
  double total = 0.0;

  double entropy() const { return intra_parse + flow_parse + residual_parse; }
};

struct DecodeResult {
  StreamHeader header;
  std::vector<Frame> frames;  // RGB
  DecodeStats stats;
};

// A payload failed to parse; carries the frame it belongs to.
class CorruptStreamError : public DecodeError {
 public:
  CorruptStreamError(const std::string& what, long long frame)
      : DecodeError("frame " + std::to_string(frame) + ": " + what),
        frame_(frame) {}
  long long frame() const { return frame_; }

 private:
  long long frame_;
};

// Container errors propagate as their bitstream.h types; payload errors
// become CorruptStreamError.
DecodeResult decode(std::span<const uint8_t> bytes);

// Thrown by encode's self-check when the decoder disagrees.
class SelfCheckError : public Error {
 public:
  using Error::Error;
};
void self_check(const EncodeResult& encoded);

// Comparison baseline: piecewise-constant intra frames (leaf means), flow
// warping, no residual. Budgets are bisected so the total size matches
// `target_bytes`; the flow budget, as a share of the intra one, is searched
// over a small grid and the best reconstruction is kept.
struct BaselineResult {
  std::vector<Frame> reconstruction;  // RGB
  size_t bytes = 0;
  double multiplier = 1.0;
  double flow_share = 0.0;  // flow_density / intra_density that won
};
BaselineResult encode_piecewise_baseline(const Video& video,
                                         const EncoderConfig& cfg,
                                         size_t target_bytes);

// PSNR of the MSE pooled over all frames and channels (peak 255).
double sequence_psnr(const std::vector<Frame>& a, const std::vector<Frame>& b);

}  // namespace hivc

#endif  // HIVC_CODEC_H_
