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

#ifndef HIVC_WARP_H_
#define HIVC_WARP_H_

#include <utility>

#include "hivc/image.h"

namespace hivc {

// Dense backward displacement: pixel (x, y) of frame t corresponds to
// (x + u, y + v) in frame t - 1.
struct FlowField {
  RealPlane u;
  RealPlane v;

  FlowField() = default;
  FlowField(int width, int height) : u(width, height, 0.0), v(width, height, 0.0) {}
  FlowField(RealPlane u_, RealPlane v_) : u(std::move(u_)), v(std::move(v_)) {}

  int width() const { return u.width(); }
  int height() const { return u.height(); }
  // Finite values bounded by max(width, height).
  bool sane() const;
  friend bool operator==(const FlowField&, const FlowField&) = default;
};

// Bilinear sample of `src` at real coordinates, clamped to the image.
double sample_bilinear(const RealPlane& src, double x, double y);

// out(x, y) = src(x + u(x, y), y + v(x, y)), bilinear, clamped.
RealPlane warp_plane(const RealPlane& src, const FlowField& flow);
RealPlane warp_plane_serial(const RealPlane& src, const FlowField& flow);

}  // namespace hivc

#endif  // HIVC_WARP_H_
