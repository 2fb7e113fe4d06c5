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

#ifndef HIVC_QUANTIZE_H_
#define HIVC_QUANTIZE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace hivc {

// Bound of the mapped coefficient interval [-127, 127].
inline constexpr double kCoefficientBound = 127.0;

// Dead-zone quantizer on [-127, 127] with 2L + 1 levels and step 127 / L.
// Indices count whole steps towards zero, so 0 maps to 0 exactly and
// |dequantize(quantize(x))| <= |x|. An even level count n is accepted and
// uses L = (n - 1) / 2, so 256 behaves like 255 (step exactly 1).
class DeadZoneQuantizer {
 public:
  // `levels` in [3, 256].
  explicit DeadZoneQuantizer(int levels);

  int levels() const { return 2 * half_levels_ + 1; }
  int max_index() const { return half_levels_; }
  double step() const { return step_; }

  int quantize(double mapped) const;
  double dequantize(int index) const;

 private:
  int half_levels_;
  double step_;
};

// Uniform quantizer with `levels` reconstruction points lo + i (hi - lo) /
// (levels - 1); the index is the nearest point. Error <= (hi - lo) /
// (2 (levels - 1)). lo == hi is accepted and yields a single point.
class UniformQuantizer {
 public:
  UniformQuantizer(double lo, double hi, int levels);

  int levels() const { return levels_; }
  int quantize(double x) const;
  double dequantize(int index) const;

 private:
  double lo_;
  double hi_;
  int levels_;
  double step_;
};

// 99.9th percentile of |c| (the maximum for short inputs); never below a
// small positive floor. Throws on empty input.
double coefficient_scale(std::span<const double> c);

// clamp(c / scale * 127, -127, 127) and its inverse m * scale / 127.
double map_coefficient(double c, double scale);
double unmap_coefficient(double mapped, double scale);
std::vector<double> map_coefficients(std::span<const double> c, double scale);

// Scales travel as unsigned 16.16 fixed point. to_fixed rounds up so the
// encoded scale never shrinks below the measured one.
uint32_t scale_to_fixed(double scale);
double scale_from_fixed(uint32_t fixed);

}  // namespace hivc

#endif  // HIVC_QUANTIZE_H_
