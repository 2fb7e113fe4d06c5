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

#ifndef HIVC_HOMOGENEOUS_H_
#define HIVC_HOMOGENEOUS_H_

#include <cstdint>
#include <vector>

#include "hivc/image.h"

namespace hivc {

// Binary per-pixel indicator of stored (known) pixels.
class InpaintingMask {
 public:
  InpaintingMask() = default;
  InpaintingMask(int width, int height) : bits_(width, height, 0) {}

  int width() const { return bits_.width(); }
  int height() const { return bits_.height(); }
  size_t size() const { return bits_.size(); }

  bool test(int x, int y) const { return bits_.at(x, y) != 0; }
  bool test(size_t i) const { return bits_[i] != 0; }
  void set(int x, int y, bool on = true) { bits_.at(x, y) = on ? 1 : 0; }
  void set(size_t i, bool on = true) { bits_[i] = on ? 1 : 0; }

  // Number of mask points (K).
  size_t count() const;
  bool full() const { return count() == size(); }

  friend bool operator==(const InpaintingMask&, const InpaintingMask&) = default;

 private:
  Plane<uint8_t> bits_;
};

// (L u) with the 5-point stencil and reflecting boundaries: the sum over the
// in-image 4-neighbours j of (u_j - u_i).
RealPlane apply_laplacian(const RealPlane& u);
// Serial reference of apply_laplacian, kept for the equivalence tests.
RealPlane apply_laplacian_serial(const RealPlane& u);

// Residual of M (u - f) - (I - M) A u = 0 with A = -L:
// r_i = u_i - f_i on the mask and (L u)_i elsewhere.
RealPlane apply_inpainting_operator(const RealPlane& u,
                                    const InpaintingMask& mask,
                                    const RealPlane& f);

struct PyramidLevel {
  RealPlane values;
  InpaintingMask mask;
};

// Level 0 is the input. Each further level halves both dimensions (ceiling)
// until max(width, height) <= 16. Coarse values are 2x2 block averages; a
// coarse pixel is in the mask iff any child is, taking the mean of the masked
// children.
std::vector<PyramidLevel> build_pyramid(const RealPlane& f,
                                        const InpaintingMask& mask);

struct CascadicOptions {
  double tolerance = 1e-6;         // finest level, relative residual
  double coarse_tolerance = 1e-4;  // intermediate levels
  int max_iterations = 20000;      // per level
  bool throw_on_failure = true;
};

struct LevelSolveStats {
  int width = 0;
  int height = 0;
  int iterations = 0;
  double relative_residual = 0.0;
};

struct SolveStats {
  std::vector<LevelSolveStats> levels;  // coarsest first
  bool converged = true;
  // Sum of iterations weighted by level pixels / finest pixels.
  double weighted_iterations() const;
};

// Homogeneous diffusion inpainting by a cascadic coarse-to-fine conjugate
// gradient scheme. Returns u with u = f on the mask and L u = 0 elsewhere,
// to ||L u restricted to unknowns|| / ||f on mask|| <= tolerance.
RealPlane solve_homogeneous(const RealPlane& f, const InpaintingMask& mask,
                            const CascadicOptions& options,
                            SolveStats* stats = nullptr);
RealPlane solve_homogeneous(const RealPlane& f, const InpaintingMask& mask,
                            double tolerance, int max_iterations);

// Plain CG on the finest level only, starting from `initial` (mask pixels are
// overwritten with f). Used to measure the cascadic speedup.
RealPlane solve_homogeneous_single_level(const RealPlane& f,
                                         const InpaintingMask& mask,
                                         const RealPlane& initial,
                                         double tolerance, int max_iterations,
                                         LevelSolveStats* stats = nullptr);

}  // namespace hivc

#endif  // HIVC_HOMOGENEOUS_H_
