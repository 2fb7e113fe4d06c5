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

#include "hivc/flow.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "hivc/entropy.h"
#include "hivc/counters.h"
#include "hivc/error.h"
#include "hivc/quantize.h"

namespace hivc {
namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void check_pair(const RealPlane& a, const RealPlane& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw InvalidArgument("flow: frames must be non-empty and equally sized");
  }
  for (const RealPlane* p : {&a, &b}) {
    for (double v : p->values()) {
      if (!std::isfinite(v)) throw InvalidArgument("flow: non-finite input");
    }
  }
}

// Central differences, one-sided halves at the border (reflection).
void gradient(const RealPlane& s, RealPlane& gx, RealPlane& gy) {
  const int w = s.width();
  const int h = s.height();
  gx = RealPlane(w, h);
  gy = RealPlane(w, h);
  for (int y = 0; y < h; ++y) {
    const double* r = s.row(y);
    const double* up = s.row(std::max(y - 1, 0));
    const double* dn = s.row(std::min(y + 1, h - 1));
    double* ox = gx.row(y);
    double* oy = gy.row(y);
    for (int x = 0; x < w; ++x) {
      ox[x] = 0.5 * (r[std::min(x + 1, w - 1)] - r[std::max(x - 1, 0)]);
      oy[x] = 0.5 * (dn[x] - up[x]);
    }
  }
}

RealPlane add(const RealPlane& a, const RealPlane& b) {
  RealPlane out(a.width(), a.height());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RealPlane upsample_flow_component(const RealPlane& c, int width, int height,
                                  double factor) {
  RealPlane out = resize_bilinear(c, width, height);
  for (double& d : out.values()) d *= factor;
  return out;
}

struct Level {
  RealPlane i1;
  RealPlane i2;
};

std::vector<Level> flow_pyramid(const RealPlane& i1, const RealPlane& i2,
                                const BroxParams& p) {
  std::vector<Level> levels;
  levels.push_back({gaussian_blur(i1, p.presmooth), gaussian_blur(i2, p.presmooth)});
  const double sigma = 0.6 * std::sqrt(1.0 / (p.scale * p.scale) - 1.0);
  while (true) {
    const Level& f = levels.back();
    const int w = static_cast<int>(std::lround(f.i1.width() * p.scale));
    const int h = static_cast<int>(std::lround(f.i1.height() * p.scale));
    if (std::min(w, h) < p.min_size) break;
    levels.push_back({resize_bilinear(gaussian_blur(f.i1, sigma), w, h),
                      resize_bilinear(gaussian_blur(f.i2, sigma), w, h)});
  }
  return levels;
}

inline double charbonnier_weight(double s2, double eps2) {
  return 1.0 / std::sqrt(s2 + eps2);
}

// One pyramid level of the warping scheme; refines (u, v) in place.
void brox_level(const Level& level, RealPlane& u, RealPlane& v,
                const BroxParams& p) {
  const int w = level.i1.width();
  const int h = level.i1.height();
  const size_t n = static_cast<size_t>(w) * h;
  const double eps2 = p.epsilon * p.epsilon;

  RealPlane i1x, i1y, i2x, i2y, i2xx, i2xy, i2yx, i2yy;
  gradient(level.i1, i1x, i1y);
  gradient(level.i2, i2x, i2y);
  gradient(i2x, i2xx, i2xy);
  gradient(i2y, i2yx, i2yy);

  std::vector<double> a11(n), a12(n), a22(n), b1(n), b2(n), psi_s(n);
  RealPlane du(w, h, 0.0), dv(w, h, 0.0);

  for (int warp = 0; warp < p.warps; ++warp) {
    const FlowField field{u, v};
    const RealPlane iz_w = warp_plane_serial(level.i2, field);
    const RealPlane ix = warp_plane_serial(i2x, field);
    const RealPlane iy = warp_plane_serial(i2y, field);
    const RealPlane ixx = warp_plane_serial(i2xx, field);
    const RealPlane ixy = warp_plane_serial(i2xy, field);
    const RealPlane iyy = warp_plane_serial(i2yy, field);
    std::fill(du.values().begin(), du.values().end(), 0.0);
    std::fill(dv.values().begin(), dv.values().end(), 0.0);

    for (int it = 0; it < p.inner; ++it) {
      // Robust weights of the current linearization.
      for (size_t i = 0; i < n; ++i) {
        const double iz = iz_w[i] - level.i1[i];
        const double ixz = ix[i] - i1x[i];
        const double iyz = iy[i] - i1y[i];
        const double d = iz + ix[i] * du[i] + iy[i] * dv[i];
        const double gxv = ixz + ixx[i] * du[i] + ixy[i] * dv[i];
        const double gyv = iyz + ixy[i] * du[i] + iyy[i] * dv[i];
        const double pd = charbonnier_weight(d * d, eps2);
        const double pg = p.gamma * charbonnier_weight(gxv * gxv + gyv * gyv, eps2);
        a11[i] = pd * ix[i] * ix[i] + pg * (ixx[i] * ixx[i] + ixy[i] * ixy[i]);
        a12[i] = pd * ix[i] * iy[i] + pg * (ixx[i] * ixy[i] + ixy[i] * iyy[i]);
        a22[i] = pd * iy[i] * iy[i] + pg * (ixy[i] * ixy[i] + iyy[i] * iyy[i]);
        b1[i] = -(pd * ix[i] * iz + pg * (ixx[i] * ixz + ixy[i] * iyz));
        b2[i] = -(pd * iy[i] * iz + pg * (ixy[i] * ixz + iyy[i] * iyz));
      }
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const int xl = std::max(x - 1, 0), xr = std::min(x + 1, w - 1);
          const int yu = std::max(y - 1, 0), yd = std::min(y + 1, h - 1);
          auto at = [&](const RealPlane& a, const RealPlane& b, int xx, int yy) {
            return a.at(xx, yy) + b.at(xx, yy);
          };
          const double ux = 0.5 * (at(u, du, xr, y) - at(u, du, xl, y));
          const double uy = 0.5 * (at(u, du, x, yd) - at(u, du, x, yu));
          const double vx = 0.5 * (at(v, dv, xr, y) - at(v, dv, xl, y));
          const double vy = 0.5 * (at(v, dv, x, yd) - at(v, dv, x, yu));
          psi_s[static_cast<size_t>(y) * w + x] =
              p.alpha * charbonnier_weight(ux * ux + uy * uy + vx * vx + vy * vy, eps2);
        }
      }

      for (int sweep = 0; sweep < p.sor_iterations; ++sweep) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            double sum_w = 0.0, su = 0.0, sv = 0.0;
            auto neighbour = [&](size_t j) {
              const double wn = 0.5 * (psi_s[i] + psi_s[j]);
              sum_w += wn;
              su += wn * (u[j] + du[j] - u[i]);
              sv += wn * (v[j] + dv[j] - v[i]);
            };
            if (x > 0) neighbour(i - 1);
            if (x + 1 < w) neighbour(i + 1);
            if (y > 0) neighbour(i - w);
            if (y + 1 < h) neighbour(i + w);
            const double nu = (b1[i] - a12[i] * dv[i] + su) / (a11[i] + sum_w);
            du[i] = (1.0 - p.omega) * du[i] + p.omega * nu;
            const double nv = (b2[i] - a12[i] * du[i] + sv) / (a22[i] + sum_w);
            dv[i] = (1.0 - p.omega) * dv[i] + p.omega * nv;
          }
        }
      }
    }
    u = add(u, du);
    v = add(v, dv);
  }
}

}  // namespace

RealPlane gaussian_blur(const RealPlane& src, double sigma) {
  if (sigma <= 0.0) return src;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double norm = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    norm += k[i + radius];
  }
  for (double& c : k) c /= norm;
  const int w = src.width();
  const int h = src.height();
  auto reflect = [](int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return i;
  };
  RealPlane tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * src.at(reflect(x + i, w), y);
      }
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * tmp.at(x, reflect(y + i, h));
      }
      out.at(x, y) = s;
    }
  }
  return out;
}

RealPlane resize_bilinear(const RealPlane& src, int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidArgument("resize: bad size");
  RealPlane out(width, height);
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = sample_bilinear(src, (x + 0.5) * sx - 0.5, fy);
    }
  }
  return out;
}

FlowField flow_brox(const RealPlane& frame_t, const RealPlane& frame_prev,
                    const BroxParams& params) {
  ++counters::flow_estimates;
  check_pair(frame_t, frame_prev);
  if (!(params.scale > 0.0 && params.scale < 1.0) || params.min_size < 1 ||
      params.warps < 1 || params.inner < 1 || params.sor_iterations < 1 ||
      !(params.omega > 0.0 && params.omega < 2.0) || !(params.epsilon > 0.0) ||
      params.alpha <= 0.0 || params.gamma < 0.0) {
    throw InvalidArgument("flow_brox: invalid parameters");
  }
  const auto levels = flow_pyramid(frame_t, frame_prev, params);
  RealPlane u, v;
  for (size_t l = levels.size(); l-- > 0;) {
    const Level& level = levels[l];
    const int w = level.i1.width();
    const int h = level.i1.height();
    if (u.empty()) {
      u = RealPlane(w, h, 0.0);
      v = RealPlane(w, h, 0.0);
    } else {
      const double fx = static_cast<double>(w) / u.width();
      const double fy = static_cast<double>(h) / u.height();
      u = upsample_flow_component(u, w, h, fx);
      v = upsample_flow_component(v, w, h, fy);
    }
    brox_level(level, u, v, params);
  }
  FlowField out;
  out.u = std::move(u);
  out.v = std::move(v);
  const double bound = std::max(out.width(), out.height());
  for (RealPlane* p : {&out.u, &out.v}) {
    for (double& d : p->values()) d = std::clamp(d, -bound, bound);
  }
  return out;
}

FlowField flow_horn_schunck(const RealPlane& frame_t,
                            const RealPlane& frame_prev, double alpha,
                            int iterations) {
  ++counters::flow_estimates;
  check_pair(frame_t, frame_prev);
  if (!(alpha > 0.0) || iterations < 1) {
    throw InvalidArgument("flow_horn_schunck: invalid parameters");
  }
  const int w = frame_t.width();
  const int h = frame_t.height();
  RealPlane ax, ay, bx, by;
  gradient(frame_t, ax, ay);
  gradient(frame_prev, bx, by);
  const size_t n = static_cast<size_t>(w) * h;
  std::vector<double> ix(n), iy(n), it(n);
  for (size_t i = 0; i < n; ++i) {
    ix[i] = 0.5 * (ax[i] + bx[i]);
    iy[i] = 0.5 * (ay[i] + by[i]);
    it[i] = frame_prev[i] - frame_t[i];
  }
  FlowField f(w, h);
  RealPlane nu(w, h), nv(w, h);
  const double a2 = alpha * alpha;
  for (int k = 0; k < iterations; ++k) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int xl = clampi(x - 1, 0, w - 1), xr = clampi(x + 1, 0, w - 1);
        const int yu = clampi(y - 1, 0, h - 1), yd = clampi(y + 1, 0, h - 1);
        const double ub = 0.25 * (f.u.at(xl, y) + f.u.at(xr, y) + f.u.at(x, yu) +
                                  f.u.at(x, yd));
        const double vb = 0.25 * (f.v.at(xl, y) + f.v.at(xr, y) + f.v.at(x, yu) +
                                  f.v.at(x, yd));
        const size_t i = static_cast<size_t>(y) * w + x;
        const double t = (ix[i] * ub + iy[i] * vb + it[i]) /
                         (a2 + ix[i] * ix[i] + iy[i] * iy[i]);
        nu.at(x, y) = ub - ix[i] * t;
        nv.at(x, y) = vb - iy[i] * t;
      }
    }
    std::swap(f.u, nu);
    std::swap(f.v, nv);
  }
  return f;
}

double prediction_mse(const RealPlane& frame_t, const RealPlane& frame_prev,
                      const FlowField& flow, int border) {
  const RealPlane pred = warp_plane_serial(frame_prev, flow);
  double s = 0.0;
  long long count = 0;
  for (int y = border; y < frame_t.height() - border; ++y) {
    for (int x = border; x < frame_t.width() - border; ++x) {
      const double d = pred.at(x, y) - frame_t.at(x, y);
      s += d * d;
      ++count;
    }
  }
  if (count == 0) throw InvalidArgument("prediction_mse: border too large");
  return s / count;
}

namespace {

CompressedFlowComponent compress_component(const RealPlane& p, int leaves,
                                           int levels) {
  const RegionStats stats(p);
  const Rect root{0, 0, p.width(), p.height()};
  CompressedFlowComponent c;
  c.tree = subdivide_by_error(
      root, leaves, [&](const Rect& r) { return stats.ssd(r); }, 1e-6);
  const auto rects = c.tree.leaves();
  std::vector<double> means(rects.size());
  for (size_t i = 0; i < rects.size(); ++i) means[i] = stats.mean(rects[i]);
  c.lo = static_cast<float>(*std::min_element(means.begin(), means.end()));
  c.hi = static_cast<float>(*std::max_element(means.begin(), means.end()));
  const UniformQuantizer q(c.lo, c.hi, levels);
  c.indices.resize(means.size());
  for (size_t i = 0; i < means.size(); ++i) c.indices[i] = q.quantize(means[i]);
  return c;
}

RealPlane decompress_component(const CompressedFlowComponent& c, int width,
                               int height, int levels) {
  const UniformQuantizer q(c.lo, c.hi, levels);
  std::vector<double> values(c.indices.size());
  for (size_t i = 0; i < values.size(); ++i) values[i] = q.dequantize(c.indices[i]);
  RealPlane out(width, height, 0.0);
  paint_leaves(c.tree, values, out);
  return out;
}

}  // namespace

CompressedFlow compress_flow(const FlowField& flow, int leaves_per_component,
                             int levels) {
  if (leaves_per_component < 1) {
    throw InvalidArgument("compress_flow: budget must be >= 1");
  }
  if (levels < 2 || levels > 256) {
    throw InvalidArgument("compress_flow: levels must be in [2, 256]");
  }
  if (!flow.sane()) throw InvalidArgument("compress_flow: flow is not sane");
  CompressedFlow out;
  out.width = flow.width();
  out.height = flow.height();
  out.levels = levels;
  const long long pixels = static_cast<long long>(out.width) * out.height;
  const int leaves = static_cast<int>(std::min<long long>(leaves_per_component, pixels));
  out.u = compress_component(flow.u, leaves, levels);
  out.v = compress_component(flow.v, leaves, levels);
  return out;
}

FlowField CompressedFlow::decompress() const {
  FlowField f;
  f.u = decompress_component(u, width, height, levels);
  f.v = decompress_component(v, width, height, levels);
  return f;
}

std::vector<uint8_t> CompressedFlow::serialize() const {
  ByteWriter w;
  w.put_f32(u.lo);
  w.put_f32(u.hi);
  w.put_f32(v.lo);
  w.put_f32(v.hi);
  BitWriter bits;
  u.tree.write(bits);
  v.tree.write(bits);
  w.put_block(bits.bytes());
  std::vector<int32_t> all(u.indices);
  all.insert(all.end(), v.indices.begin(), v.indices.end());
  encode_integers(dpcm_forward(all), w);
  return w.take();
}

CompressedFlow CompressedFlow::parse(std::span<const uint8_t> bytes, int width,
                                     int height, int levels) {
  ByteReader r(bytes);
  CompressedFlow out;
  out.width = width;
  out.height = height;
  out.levels = levels;
  for (CompressedFlowComponent* c : {&out.u, &out.v}) {
    c->lo = r.get_f32();
    c->hi = r.get_f32();
    if (!std::isfinite(c->lo) || !std::isfinite(c->hi) || c->lo > c->hi) {
      throw DecodeError("flow payload: bad value range");
    }
  }
  const Rect root{0, 0, width, height};
  {
    const auto tree_bytes = r.get_block();
    BitReader br(tree_bytes);
    out.u.tree = SubdivisionTree::read(root, br);
    out.v.tree = SubdivisionTree::read(root, br);
    if (br.remaining() >= 8) throw DecodeError("flow payload: trailing tree bytes");
  }
  const size_t nu = out.u.tree.leaf_count();
  const size_t nv = out.v.tree.leaf_count();
  const auto deltas = decode_integers(r, nu + nv);
  if (deltas.size() != nu + nv) throw DecodeError("flow payload: leaf count mismatch");
  if (!r.at_end()) throw DecodeError("flow payload: trailing bytes");
  const auto all = dpcm_inverse(deltas);
  for (int32_t i : all) {
    if (i < 0 || i >= levels) throw DecodeError("flow payload: index out of range");
  }
  out.u.indices.assign(all.begin(), all.begin() + nu);
  out.v.indices.assign(all.begin() + nu, all.end());
  return out;
}

Frame flow_to_color(const FlowField& flow, double max_magnitude) {
  // Colour wheel with the usual hue segment lengths.
  static const std::vector<std::array<double, 3>> wheel = [] {
    std::vector<std::array<double, 3>> w;
    const int ry = 15, yg = 6, gc = 4, cb = 11, bm = 13, mr = 6;
    for (int i = 0; i < ry; ++i) w.push_back({255, 255.0 * i / ry, 0});
    for (int i = 0; i < yg; ++i) w.push_back({255 - 255.0 * i / yg, 255, 0});
    for (int i = 0; i < gc; ++i) w.push_back({0, 255, 255.0 * i / gc});
    for (int i = 0; i < cb; ++i) w.push_back({0, 255 - 255.0 * i / cb, 255});
    for (int i = 0; i < bm; ++i) w.push_back({255.0 * i / bm, 0, 255});
    for (int i = 0; i < mr; ++i) w.push_back({255, 0, 255 - 255.0 * i / mr});
    return w;
  }();
  const int w = flow.width();
  const int h = flow.height();
  if (max_magnitude <= 0.0) {
    for (size_t i = 0; i < flow.u.size(); ++i) {
      max_magnitude = std::max(max_magnitude, std::hypot(flow.u[i], flow.v[i]));
    }
    if (max_magnitude <= 0.0) max_magnitude = 1.0;
  }
  Frame out(w, h, 3, ColorSpace::kRgb);
  const int ncols = static_cast<int>(wheel.size());
  for (size_t i = 0; i < flow.u.size(); ++i) {
    const double fu = flow.u[i] / max_magnitude;
    const double fv = flow.v[i] / max_magnitude;
    const double rad = std::min(1.0, std::hypot(fu, fv));
    const double angle = std::atan2(-fv, -fu) / std::numbers::pi;
    const double fk = (angle + 1.0) / 2.0 * (ncols - 1);
    const int k0 = static_cast<int>(fk);
    const int k1 = (k0 + 1) % ncols;
    const double t = fk - k0;
    for (int c = 0; c < 3; ++c) {
      const double col = ((1 - t) * wheel[k0][c] + t * wheel[k1][c]) / 255.0;
      const double val = 1.0 - rad * (1.0 - col);
      out.planes[c][i] = static_cast<int32_t>(std::lround(255.0 * val));
    }
  }
  return out;
}

}  // namespace hivc
