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

#ifndef HIVC_FLOW_H_
#define HIVC_FLOW_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hivc/bitio.h"
#include "hivc/image.h"
#include "hivc/subdivision.h"
#include "hivc/warp.h"

namespace hivc {

// Coarse-to-fine warping flow with Charbonnier-penalized brightness and
// gradient constancy and a Charbonnier (total-variation like) smoothness
// term. Intensities are expected on the [0, 255] scale.
struct BroxParams {
  double alpha = 12.0;       // smoothness weight
  double gamma = 1.0;        // gradient constancy weight
  double presmooth = 0.5;    // Gaussian sigma applied before the pyramid
  double scale = 0.5;        // pyramid factor
  int min_size = 16;         // coarsest level keeps min(w, h) >= this
  int warps = 3;             // outer warping iterations per level
  int inner = 5;             // lagged-nonlinearity fixed-point iterations
  int sor_iterations = 10;
  double omega = 1.9;        // SOR relaxation
  double epsilon = 1e-3;     // Charbonnier epsilon
};

// Backward flow: frame_t(x) ~ frame_prev(x + w(x)).
FlowField flow_brox(const RealPlane& frame_t, const RealPlane& frame_prev,
                    const BroxParams& params = {});

// Classical single-scale Horn-Schunck with Jacobi updates.
FlowField flow_horn_schunck(const RealPlane& frame_t,
                            const RealPlane& frame_prev, double alpha = 10.0,
                            int iterations = 400);

// Mean squared error between frame_t and frame_prev warped by `flow`,
// ignoring a border of `border` pixels.
double prediction_mse(const RealPlane& frame_t, const RealPlane& frame_prev,
                      const FlowField& flow, int border = 0);

RealPlane gaussian_blur(const RealPlane& src, double sigma);
// Bilinear resampling to an arbitrary size (pixel centres aligned).
RealPlane resize_bilinear(const RealPlane& src, int width, int height);

// Per component: subdivision tree, leaf means quantized uniformly over the
// [lo, hi] range of the leaf means.
struct CompressedFlowComponent {
  SubdivisionTree tree;
  float lo = 0.0f;
  float hi = 0.0f;
  std::vector<int32_t> indices;  // preorder leaves
};

struct CompressedFlow {
  int width = 0;
  int height = 0;
  int levels = 256;
  CompressedFlowComponent u;
  CompressedFlowComponent v;

  FlowField decompress() const;
  // [f32 lo_u][f32 hi_u][f32 lo_v][f32 hi_v][u32 len][tree bits u, v]
  // [integer payload: DPCM of the u indices then the v indices]
  std::vector<uint8_t> serialize() const;
  static CompressedFlow parse(std::span<const uint8_t> bytes, int width,
                              int height, int levels);
};

// leaves_per_component >= 1; zero-variance components stay a single leaf.
CompressedFlow compress_flow(const FlowField& flow, int leaves_per_component,
                             int levels);

// Colour-wheel visualisation; magnitudes >= max_magnitude saturate. A
// non-positive max_magnitude uses the field's maximum.
Frame flow_to_color(const FlowField& flow, double max_magnitude = 0.0);

}  // namespace hivc

#endif  // HIVC_FLOW_H_
