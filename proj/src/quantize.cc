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

#include "hivc/quantize.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hivc/error.h"

namespace hivc {

DeadZoneQuantizer::DeadZoneQuantizer(int levels) {
  if (levels < 3 || levels > 256) {
    throw InvalidArgument("dead-zone quantizer needs a level count in "
                          "[3, 256], got " + std::to_string(levels));
  }
  half_levels_ = (levels - 1) / 2;
  step_ = kCoefficientBound / half_levels_;
}

int DeadZoneQuantizer::quantize(double mapped) const {
  const double mag = std::min(std::abs(mapped), kCoefficientBound);
  const int index =
      std::min(half_levels_, static_cast<int>(std::floor(mag / step_)));
  return mapped < 0.0 ? -index : index;
}

double DeadZoneQuantizer::dequantize(int index) const {
  if (index == 0) return 0.0;
  return index * step_;
}

UniformQuantizer::UniformQuantizer(double lo, double hi, int levels)
    : lo_(lo), hi_(hi), levels_(levels) {
  if (levels < 2) throw InvalidArgument("uniform quantizer needs >= 2 levels");
  if (!(lo <= hi)) throw InvalidArgument("uniform quantizer needs lo <= hi");
  step_ = (hi - lo) / (levels - 1);
}

int UniformQuantizer::quantize(double x) const {
  if (step_ == 0.0) return 0;
  const double t = std::round((x - lo_) / step_);
  return static_cast<int>(std::clamp(t, 0.0, levels_ - 1.0));
}

double UniformQuantizer::dequantize(int index) const {
  if (index == levels_ - 1) return hi_;
  return lo_ + index * step_;
}

double coefficient_scale(std::span<const double> c) {
  if (c.empty()) throw InvalidArgument("coefficient_scale: empty input");
  std::vector<double> mags(c.size());
  for (size_t i = 0; i < c.size(); ++i) mags[i] = std::abs(c[i]);
  const size_t rank = static_cast<size_t>(
      std::ceil(0.999 * static_cast<double>(mags.size()))) - 1;
  std::nth_element(mags.begin(), mags.begin() + rank, mags.end());
  double s = mags[rank];
  if (s <= 0.0) s = *std::max_element(mags.begin(), mags.end());
  return std::max(s, 1.0 / 65536.0);
}

double map_coefficient(double c, double scale) {
  return std::clamp(c / scale * kCoefficientBound, -kCoefficientBound,
                    kCoefficientBound);
}

double unmap_coefficient(double mapped, double scale) {
  return mapped * scale / kCoefficientBound;
}

std::vector<double> map_coefficients(std::span<const double> c, double scale) {
  if (c.empty()) throw InvalidArgument("map_coefficients: empty input");
  if (!(scale > 0.0)) throw InvalidArgument("map_coefficients: scale <= 0");
  std::vector<double> out(c.size());
  for (size_t i = 0; i < c.size(); ++i) out[i] = map_coefficient(c[i], scale);
  return out;
}

uint32_t scale_to_fixed(double scale) {
  const double f = std::ceil(scale * 65536.0);
  return static_cast<uint32_t>(std::clamp(f, 1.0, 4294967295.0));
}

double scale_from_fixed(uint32_t fixed) {
  return static_cast<double>(fixed) / 65536.0;
}

}  // namespace hivc
