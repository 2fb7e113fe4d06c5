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

#include "hivc/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hivc/error.h"

namespace hivc {

SmoothTexture::SmoothTexture(uint64_t seed, int waves, double min_period) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double fmax = 2.0 * std::numbers::pi / min_period;
  double total = 0.0;
  for (int i = 0; i < waves; ++i) {
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const double f = fmax * (0.15 + 0.85 * unit(rng));
    const double amp = 0.3 + unit(rng);
    waves_.push_back({f * std::cos(angle), f * std::sin(angle),
                      2.0 * std::numbers::pi * unit(rng), amp});
    total += amp;
  }
  for (auto& w : waves_) w.amp *= 120.0 / total;
}

SmoothTexture SmoothTexture::natural(uint64_t seed, int waves,
                                     double min_period, double max_period,
                                     double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SmoothTexture t;
  double total = 0.0;
  for (int i = 0; i < waves; ++i) {
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const double period =
        min_period * std::pow(max_period / min_period, unit(rng));
    const double f = 2.0 * std::numbers::pi / period;
    const double amp = period * (0.5 + unit(rng));
    t.waves_.push_back({f * std::cos(angle), f * std::sin(angle),
                        2.0 * std::numbers::pi * unit(rng), amp});
    total += amp;
  }
  for (auto& w : t.waves_) w.amp *= range / total;
  return t;
}

double SmoothTexture::operator()(double x, double y) const {
  double s = offset_;
  for (const auto& w : waves_) s += w.amp * std::sin(w.fx * x + w.fy * y + w.phase);
  return s;
}

RealPlane SmoothTexture::render(int width, int height, double dx, double dy) const {
  RealPlane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = (*this)(x + dx, y + dy);
  }
  return out;
}

FramePair shifted_pair(int width, int height, double dx, double dy,
                       uint64_t seed) {
  const SmoothTexture tex(seed);
  return {tex.render(width, height, dx, dy), tex.render(width, height)};
}

FramePair two_object_pair(int width, int height, uint64_t seed) {
  const SmoothTexture a(seed), b(seed + 7919);
  FramePair p{RealPlane(width, height), RealPlane(width, height)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool left = x < width / 2;
      p.frame_prev.at(x, y) = left ? a(x, y) : b(x, y);
      p.frame_t.at(x, y) = left ? a(x + 2.0, y) : b(x, y + 2.0);
    }
  }
  return p;
}

namespace {

int to_byte(double v) {
  return static_cast<int>(std::clamp(std::lround(v), 0L, 255L));
}

struct Blob {
  double cx, cy, rx, ry, vx, vy;
  SmoothTexture tex;
  double tint[3];
};

// Flat-coloured rotated rectangle fixed to the background.
struct Patch {
  double cx, cy, hw, hh, cos_a, sin_a;
  double rgb[3];

  // Coverage in [0, 1] with a one-pixel anti-aliased edge.
  double coverage(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double u = std::abs(cos_a * dx + sin_a * dy);
    const double v = std::abs(-sin_a * dx + cos_a * dy);
    const double inside = std::min(hw - u, hh - v);
    return std::clamp(inside + 0.5, 0.0, 1.0);
  }
};

double ellipse_coverage(double dx, double dy, double rx, double ry) {
  const double r = std::sqrt((dx / rx) * (dx / rx) + (dy / ry) * (dy / ry));
  return std::clamp((1.0 - r) * std::min(rx, ry) + 0.5, 0.0, 1.0);
}

}  // namespace

Video synthetic_clip(int width, int height, int frames, uint64_t seed) {
  if (width < 1 || height < 1 || frames < 0) {
    throw InvalidArgument("synthetic_clip: bad size");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Luma-like detail shared by the channels, smoother colour variation.
  const SmoothTexture detail = SmoothTexture::natural(seed * 5 + 1, 48, 5.0, 300.0, 150.0);
  const SmoothTexture tint_r = SmoothTexture::natural(seed * 5 + 2, 8, 60.0, 400.0, 60.0);
  const SmoothTexture tint_b = SmoothTexture::natural(seed * 5 + 3, 8, 60.0, 400.0, 60.0);
  const double pan_x = 0.6 + 0.8 * unit(rng);
  const double pan_y = 0.3 * (unit(rng) - 0.5);
  std::vector<Patch> patches;
  for (int i = 0; i < 6; ++i) {
    const double hw = width * (0.025 + 0.075 * unit(rng));
    const double hh = height * (0.05 + 0.15 * unit(rng));
    const double px = (width + 20.0 * frames) * unit(rng);
    const double py = height * unit(rng);
    const double angle = std::numbers::pi * unit(rng);
    patches.push_back({px, py, hw, hh, std::cos(angle), std::sin(angle),
                       {255.0 * unit(rng), 255.0 * unit(rng), 255.0 * unit(rng)}});
  }
  std::vector<Blob> blobs;
  for (int i = 0; i < 2; ++i) {
    Blob b{width * (0.25 + 0.5 * unit(rng)),
           height * (0.3 + 0.4 * unit(rng)),
           width * (0.08 + 0.06 * unit(rng)),
           height * (0.15 + 0.1 * unit(rng)),
           (unit(rng) - 0.5) * 4.0,
           (unit(rng) - 0.5) * 2.0,
           SmoothTexture::natural(seed * 31 + i, 24, 4.0, 80.0, 200.0),
           {0.4 + 0.6 * unit(rng), 0.4 + 0.6 * unit(rng), 0.4 + 0.6 * unit(rng)}};
    blobs.push_back(std::move(b));
  }

  Video video;
  video.info = {width, height, 24, 1};
  for (int t = 0; t < frames; ++t) {
    Frame f(width, height, 3, ColorSpace::kRgb);
    const double ox = pan_x * t;
    const double oy = pan_y * t;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double bx = x + ox;
        const double by = y + oy;
        const double l = detail(bx, by);
        double rgb[3] = {l + tint_r(bx, by) - 127.5, l, l + tint_b(bx, by) - 127.5};
        for (const Patch& p : patches) {
          const double w = p.coverage(bx, by);
          if (w <= 0.0) continue;
          for (int c = 0; c < 3; ++c) {
            rgb[c] += w * (0.8 * p.rgb[c] + 0.2 * l - rgb[c]);
          }
        }
        for (const Blob& b : blobs) {
          const double cx = b.cx + b.vx * t;
          const double cy = b.cy + b.vy * t;
          const double w = ellipse_coverage(x - cx, y - cy, b.rx, b.ry);
          if (w <= 0.0) continue;
          const double v = b.tex(x - cx, y - cy);
          for (int c = 0; c < 3; ++c) rgb[c] += w * (b.tint[c] * v - rgb[c]);
        }
        for (int c = 0; c < 3; ++c) f.planes[c].at(x, y) = to_byte(rgb[c]);
      }
    }
    video.frames.push_back(std::move(f));
  }
  return video;
}

Video static_clip(int width, int height, int frames, uint64_t seed) {
  Video v = synthetic_clip(width, height, 1, seed);
  const Frame first = v.frames.front();
  v.frames.assign(static_cast<size_t>(frames), first);
  return v;
}

}  // namespace hivc
