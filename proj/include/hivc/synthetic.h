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

#ifndef HIVC_SYNTHETIC_H_
#define HIVC_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "hivc/image.h"
#include "hivc/io.h"

namespace hivc {

// Band-limited analytic texture: a sum of random plane waves with periods
// of at least `min_period` pixels, on [0, 255]. It can be evaluated at real
// positions, so shifted copies are exact.
class SmoothTexture {
 public:
  explicit SmoothTexture(uint64_t seed, int waves = 12, double min_period = 12.0);
  // Periods log-uniform in [min_period, max_period] with amplitude
  // proportional to the period: the 1/f spectrum of natural images.
  static SmoothTexture natural(uint64_t seed, int waves, double min_period,
                               double max_period, double range = 120.0);

  double operator()(double x, double y) const;
  // Plane sampled at (x + dx, y + dy).
  RealPlane render(int width, int height, double dx = 0.0, double dy = 0.0) const;

 private:
  struct Wave {
    double fx, fy, phase, amp;
  };
  SmoothTexture() = default;
  std::vector<Wave> waves_;
  double offset_ = 127.5;
};

struct FramePair {
  RealPlane frame_t;
  RealPlane frame_prev;
};

// frame_t(x) = frame_prev(x + (dx, dy)) for a smooth texture.
FramePair shifted_pair(int width, int height, double dx, double dy,
                       uint64_t seed);

// Left half moves by (2, 0), right half by (0, 2); separate textures.
// region_of(x) is 0 for x < width / 2, 1 otherwise.
FramePair two_object_pair(int width, int height, uint64_t seed);

// Deterministic RGB test clip: a panning background with a 1/f texture and
// flat hard-edged shapes, plus two moving textured objects. Meant to have
// roughly the statistics of natural footage.
Video synthetic_clip(int width, int height, int frames, uint64_t seed = 1);

// All frames identical.
Video static_clip(int width, int height, int frames, uint64_t seed = 1);

}  // namespace hivc

#endif  // HIVC_SYNTHETIC_H_
