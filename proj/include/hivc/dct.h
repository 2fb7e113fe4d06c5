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

#ifndef HIVC_DCT_H_
#define HIVC_DCT_H_

#include <array>

namespace hivc {

using Block8 = std::array<double, 64>;  // row-major 8x8

namespace aan {

// Arai-Agui-Nakajima factorization of the length-8 DCT-II, 5 multiplications
// and 29 additions per pass. Output k carries the factor sqrt(8) * s_k with
// s_0 = 1 and s_k = sqrt(2) cos(k pi / 16).
template <typename T>
inline void forward_1d(T* d, int stride) {
  const T c4(0.70710678118654752440);   // cos(pi/4)
  const T c6(0.38268343236508977173);   // cos(3pi/8)
  const T c2m6(0.54119610014619698440); // sqrt(2) cos(3pi/8)
  const T c2p6(1.30656296487637652786); // sqrt(2) cos(pi/8)

  T tmp0 = d[0 * stride] + d[7 * stride];
  T tmp7 = d[0 * stride] - d[7 * stride];
  T tmp1 = d[1 * stride] + d[6 * stride];
  T tmp6 = d[1 * stride] - d[6 * stride];
  T tmp2 = d[2 * stride] + d[5 * stride];
  T tmp5 = d[2 * stride] - d[5 * stride];
  T tmp3 = d[3 * stride] + d[4 * stride];
  T tmp4 = d[3 * stride] - d[4 * stride];

  T tmp10 = tmp0 + tmp3;
  T tmp13 = tmp0 - tmp3;
  T tmp11 = tmp1 + tmp2;
  T tmp12 = tmp1 - tmp2;
  d[0 * stride] = tmp10 + tmp11;
  d[4 * stride] = tmp10 - tmp11;
  T z1 = (tmp12 + tmp13) * c4;
  d[2 * stride] = tmp13 + z1;
  d[6 * stride] = tmp13 - z1;

  tmp10 = tmp4 + tmp5;
  tmp11 = tmp5 + tmp6;
  tmp12 = tmp6 + tmp7;
  T z5 = (tmp10 - tmp12) * c6;
  T z2 = tmp10 * c2m6 + z5;
  T z4 = tmp12 * c2p6 + z5;
  T z3 = tmp11 * c4;
  T z11 = tmp7 + z3;
  T z13 = tmp7 - z3;
  d[5 * stride] = z13 + z2;
  d[3 * stride] = z13 - z2;
  d[1 * stride] = z11 + z4;
  d[7 * stride] = z11 - z4;
}

// Inverse of forward_1d up to the same per-coefficient factors: feeding
// X_k * s_k / sqrt(8) yields the samples. 5 multiplications, 29 additions.
template <typename T>
inline void inverse_1d(T* d, int stride) {
  const T r2(1.41421356237309504880);   // sqrt(2)
  const T a5(1.84775906502257351225);   // 2 cos(pi/8)
  const T a2(1.08239220029239396880);   // 2 (cos(pi/8) - cos(3pi/8))
  const T a4(2.61312592975275305572);   // 2 (cos(pi/8) + cos(3pi/8))

  T tmp0 = d[0 * stride];
  T tmp1 = d[2 * stride];
  T tmp2 = d[4 * stride];
  T tmp3 = d[6 * stride];
  T tmp10 = tmp0 + tmp2;
  T tmp11 = tmp0 - tmp2;
  T tmp13 = tmp1 + tmp3;
  T tmp12 = (tmp1 - tmp3) * r2 - tmp13;
  tmp0 = tmp10 + tmp13;
  tmp3 = tmp10 - tmp13;
  tmp1 = tmp11 + tmp12;
  tmp2 = tmp11 - tmp12;

  T tmp4 = d[1 * stride];
  T tmp5 = d[3 * stride];
  T tmp6 = d[5 * stride];
  T tmp7 = d[7 * stride];
  T z13 = tmp6 + tmp5;
  T z10 = tmp6 - tmp5;
  T z11 = tmp4 + tmp7;
  T z12 = tmp4 - tmp7;
  tmp7 = z11 + z13;
  tmp11 = (z11 - z13) * r2;
  T z5 = (z10 + z12) * a5;
  tmp10 = z12 * a2 - z5;
  tmp12 = z5 - z10 * a4;
  tmp6 = tmp12 - tmp7;
  tmp5 = tmp11 - tmp6;
  tmp4 = tmp10 + tmp5;

  d[0 * stride] = tmp0 + tmp7;
  d[7 * stride] = tmp0 - tmp7;
  d[1 * stride] = tmp1 + tmp6;
  d[6 * stride] = tmp1 - tmp6;
  d[2 * stride] = tmp2 + tmp5;
  d[5 * stride] = tmp2 - tmp5;
  d[4 * stride] = tmp3 + tmp4;
  d[3 * stride] = tmp3 - tmp4;
}

// Unscaled 2D transforms (rows then columns). forward_8x8 yields
// 8 s_u s_v F(u, v) for the orthonormal DCT-II F; inverse_8x8 maps
// F(u, v) s_u s_v / 8 back to samples.
template <typename T>
inline void forward_8x8(std::array<T, 64>& b) {
  for (int r = 0; r < 8; ++r) forward_1d(b.data() + 8 * r, 1);
  for (int c = 0; c < 8; ++c) forward_1d(b.data() + c, 8);
}

template <typename T>
inline void inverse_8x8(std::array<T, 64>& b) {
  for (int c = 0; c < 8; ++c) inverse_1d(b.data() + c, 8);
  for (int r = 0; r < 8; ++r) inverse_1d(b.data() + 8 * r, 1);
}

// s_k from the comments above.
const std::array<double, 8>& scale_factors();

}  // namespace aan

// Orthonormal 2D DCT-II and its inverse (DCT-III) via the AAN kernels.
Block8 dct2_aan_8x8(const Block8& block);
Block8 idct2_aan_8x8(const Block8& coeffs);

}  // namespace hivc

#endif  // HIVC_DCT_H_
