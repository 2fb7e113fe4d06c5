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

#ifndef HIVC_IMAGE_H_
#define HIVC_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace hivc {

// Axis-aligned pixel rectangle.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  long long area() const { return static_cast<long long>(w) * h; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Row-major single-channel raster with a top-left origin.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }
  const T* row(int y) const {
    return data_.data() + static_cast<size_t>(y) * width_;
  }

  bool same_shape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_shape(const Plane<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane& a, const Plane& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  size_t index(int x, int y) const {
    return static_cast<size_t>(y) * static_cast<size_t>(width_) +
           static_cast<size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using IntPlane = Plane<int32_t>;
using RealPlane = Plane<double>;

// Residual planes hold original minus prediction; Y lies in [-255, 255] and
// U, V in [-510, 510].
using ResidualPlane = IntPlane;

enum class ColorSpace { kGray, kRgb, kYuv };

// Planar 8-bit video frame. For kYuv the planes are Y, U, V in the range
// produced by rct_forward (Y in [0, 255], U and V in [-255, 255]).
struct Frame {
  int width = 0;
  int height = 0;
  ColorSpace space = ColorSpace::kRgb;
  std::vector<IntPlane> planes;

  Frame() = default;
  Frame(int w, int h, int channels, ColorSpace cs);

  int channels() const { return static_cast<int>(planes.size()); }
  friend bool operator==(const Frame& a, const Frame& b) = default;
};

// Checks the plane-size invariant and the per-color-space value ranges.
void validate_frame(const Frame& frame);

// JPEG2000 reversible color transform:
//   Y = floor((R + 2G + B) / 4),  U = B - G,  V = R - G.
Frame rct_forward(const Frame& rgb);

// G = Y - floor((U + V) / 4), R = V + G, B = U + G. Input planes must be in
// range; outputs are clamped to [0, 255] so lossy reconstructions stay valid
// RGB (a no-op for exact rct_forward outputs).
Frame rct_inverse(const Frame& yuv);

// Per-pixel helpers shared by the exhaustive tests and the frame versions.
struct Yuv {
  int y, u, v;
};
struct Rgb {
  int r, g, b;
};
inline Yuv rct_forward_pixel(Rgb p) {
  return {(p.r + 2 * p.g + p.b) >> 2, p.b - p.g, p.r - p.g};
}
inline Rgb rct_inverse_pixel(Yuv p) {
  const int g = p.y - ((p.u + p.v) >> 2);
  return {p.v + g, g, p.u + g};
}

// Returned by psnr when the frames are identical.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// PSNR with peak 255 over all samples of all channels (joint MSE). Frames
// are compared in whatever space they are given; the codec reports RGB.
double psnr(const Frame& a, const Frame& b);
double mse(const Frame& a, const Frame& b);

RealPlane to_real(const IntPlane& plane);

// Inclusive value range of a YUV channel (0 = Y, 1 = U, 2 = V).
inline int channel_min(int channel) { return channel == 0 ? 0 : -255; }
inline int channel_max(int) { return 255; }

}  // namespace hivc

#endif  // HIVC_IMAGE_H_
