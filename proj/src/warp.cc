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

#include "hivc/warp.h"

#include <algorithm>
#include <cmath>

#include "hivc/error.h"

namespace hivc {
namespace {

void check_shapes(const RealPlane& src, const FlowField& flow) {
  if (!src.same_shape(flow.u) || !src.same_shape(flow.v)) {
    throw InvalidArgument("warp: flow and image sizes differ");
  }
}

inline void warp_row(const RealPlane& src, const FlowField& flow, int y,
                     double* out) {
  const double* u = flow.u.row(y);
  const double* v = flow.v.row(y);
  for (int x = 0; x < src.width(); ++x) {
    out[x] = sample_bilinear(src, x + u[x], y + v[x]);
  }
}

}  // namespace

bool FlowField::sane() const {
  const double bound = std::max(width(), height());
  for (const RealPlane* p : {&u, &v}) {
    for (double d : p->values()) {
      if (!std::isfinite(d) || std::abs(d) > bound) return false;
    }
  }
  return true;
}

double sample_bilinear(const RealPlane& src, double x, double y) {
  const int w = src.width();
  const int h = src.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = std::min(static_cast<int>(x), w - 1);
  const int y0 = std::min(static_cast<int>(y), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = src.at(x0, y0) + fx * (src.at(x1, y0) - src.at(x0, y0));
  const double bot = src.at(x0, y1) + fx * (src.at(x1, y1) - src.at(x0, y1));
  return top + fy * (bot - top);
}

RealPlane warp_plane(const RealPlane& src, const FlowField& flow) {
  check_shapes(src, flow);
  RealPlane out(src.width(), src.height());
  const int h = src.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) warp_row(src, flow, y, out.row(y));
  return out;
}

RealPlane warp_plane_serial(const RealPlane& src, const FlowField& flow) {
  check_shapes(src, flow);
  RealPlane out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y) warp_row(src, flow, y, out.row(y));
  return out;
}

}  // namespace hivc
