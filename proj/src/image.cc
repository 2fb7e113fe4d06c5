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

#include "hivc/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hivc/error.h"

namespace hivc {

Frame::Frame(int w, int h, int channels, ColorSpace cs)
    : width(w), height(h), space(cs) {
  planes.reserve(channels);
  for (int c = 0; c < channels; ++c) planes.emplace_back(w, h);
}

void validate_frame(const Frame& frame) {
  if (frame.width <= 0 || frame.height <= 0) {
    throw InvalidArgument("frame has empty dimensions");
  }
  const int expected = frame.space == ColorSpace::kGray ? 1 : 3;
  if (frame.channels() != expected) {
    throw InvalidArgument("frame has " + std::to_string(frame.channels()) +
                          " channels, expected " + std::to_string(expected));
  }
  for (int c = 0; c < frame.channels(); ++c) {
    const IntPlane& p = frame.planes[c];
    if (p.width() != frame.width || p.height() != frame.height) {
      throw InvalidArgument("plane size does not match frame size");
    }
    const int lo = frame.space == ColorSpace::kYuv ? channel_min(c) : 0;
    const int hi = 255;
    for (int32_t v : p.values()) {
      if (v < lo || v > hi) {
        throw InvalidArgument("sample " + std::to_string(v) +
                              " out of range in channel " + std::to_string(c));
      }
    }
  }
}

Frame rct_forward(const Frame& rgb) {
  if (rgb.channels() != 3 || rgb.space != ColorSpace::kRgb) {
    throw InvalidArgument("rct_forward expects a 3-channel RGB frame");
  }
  Frame yuv(rgb.width, rgb.height, 3, ColorSpace::kYuv);
  const size_t n = rgb.planes[0].size();
  const int32_t* r = rgb.planes[0].data();
  const int32_t* g = rgb.planes[1].data();
  const int32_t* b = rgb.planes[2].data();
  int32_t* y = yuv.planes[0].data();
  int32_t* u = yuv.planes[1].data();
  int32_t* v = yuv.planes[2].data();
  for (size_t i = 0; i < n; ++i) {
    const Yuv p = rct_forward_pixel({r[i], g[i], b[i]});
    y[i] = p.y;
    u[i] = p.u;
    v[i] = p.v;
  }
  return yuv;
}

Frame rct_inverse(const Frame& yuv) {
  if (yuv.channels() != 3 || yuv.space != ColorSpace::kYuv) {
    throw InvalidArgument("rct_inverse expects a 3-channel YUV frame");
  }
  Frame rgb(yuv.width, yuv.height, 3, ColorSpace::kRgb);
  const size_t n = yuv.planes[0].size();
  const int32_t* y = yuv.planes[0].data();
  const int32_t* u = yuv.planes[1].data();
  const int32_t* v = yuv.planes[2].data();
  for (size_t i = 0; i < n; ++i) {
    if (y[i] < 0 || y[i] > 255 || u[i] < -255 || u[i] > 255 || v[i] < -255 ||
        v[i] > 255) {
      throw InvalidArgument("YUV sample out of range at index " +
                            std::to_string(i));
    }
    const Rgb p = rct_inverse_pixel({y[i], u[i], v[i]});
    rgb.planes[0][i] = std::clamp(p.r, 0, 255);
    rgb.planes[1][i] = std::clamp(p.g, 0, 255);
    rgb.planes[2][i] = std::clamp(p.b, 0, 255);
  }
  return rgb;
}

double mse(const Frame& a, const Frame& b) {
  if (a.width != b.width || a.height != b.height ||
      a.channels() != b.channels()) {
    throw InvalidArgument("mse: frame dimensions differ");
  }
  double sum = 0.0;
  size_t count = 0;
  for (int c = 0; c < a.channels(); ++c) {
    const auto pa = a.planes[c].values();
    const auto pb = b.planes[c].values();
    for (size_t i = 0; i < pa.size(); ++i) {
      const double d = static_cast<double>(pa[i]) - pb[i];
      sum += d * d;
    }
    count += pa.size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double psnr(const Frame& a, const Frame& b) {
  const double e = mse(a, b);
  if (e == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

RealPlane to_real(const IntPlane& plane) {
  RealPlane out(plane.width(), plane.height());
  for (size_t i = 0; i < plane.size(); ++i) out[i] = plane[i];
  return out;
}

}  // namespace hivc
