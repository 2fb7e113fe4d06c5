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

#include "hivc/dct.h"

#include <cmath>
#include <numbers>

namespace hivc {
namespace aan {

const std::array<double, 8>& scale_factors() {
  static const std::array<double, 8> s = [] {
    std::array<double, 8> out{};
    out[0] = 1.0;
    for (int k = 1; k < 8; ++k) {
      out[k] = std::sqrt(2.0) * std::cos(k * std::numbers::pi / 16.0);
    }
    return out;
  }();
  return s;
}

}  // namespace aan

Block8 dct2_aan_8x8(const Block8& block) {
  Block8 b = block;
  aan::forward_8x8(b);
  const auto& s = aan::scale_factors();
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) b[8 * v + u] /= 8.0 * s[u] * s[v];
  }
  return b;
}

Block8 idct2_aan_8x8(const Block8& coeffs) {
  Block8 b = coeffs;
  const auto& s = aan::scale_factors();
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) b[8 * v + u] *= s[u] * s[v] / 8.0;
  }
  aan::inverse_8x8(b);
  return b;
}

}  // namespace hivc
