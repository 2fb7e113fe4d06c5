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

#include "hivc/prediction.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hivc/bitio.h"
#include "hivc/entropy.h"
#include "hivc/error.h"
#include "hivc/quantize.h"

namespace hivc {
namespace {

int clamp_channel(double v, int channel) {
  const double r = std::nearbyint(v);
  return static_cast<int>(std::clamp(r, static_cast<double>(channel_min(channel)),
                                     static_cast<double>(channel_max(channel))));
}

const SubdivisionTree& tree_for(const IntraData& d, int channel) {
  return channel == 0 ? d.luma_tree : d.chroma_tree;
}

std::vector<double> dequantized(const IntraChannel& ch, int levels) {
  const UniformQuantizer q(ch.lo, ch.hi, levels);
  std::vector<double> out(ch.indices.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = q.dequantize(ch.indices[i]);
  return out;
}

void check_channels(int channels) {
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("intra: frames need 1 or 3 channels");
  }
}

// Greedy tree on the mean-deviation proxy up to half the budget, then
// `rounds` refinements in which a leaf's error is the squared error of the
// actual inpainting from the current mask.
SubdivisionTree build_intra_tree(const Rect& root, long long k,
                                 std::span<const RealPlane* const> planes,
                                 int rounds) {
  const RegionStats stats(planes);
  auto ssd = [&](const Rect& r) { return stats.ssd(r); };
  if (rounds <= 0 || k < 4) return subdivide_by_error(root, static_cast<int>(k), ssd);
  const long long first = k / 2;
  SubdivisionTree tree = subdivide_by_error(root, static_cast<int>(first), ssd);
  const CascadicOptions options = intra_solver_options();
  for (int round = 1; round <= rounds; ++round) {
    const InpaintingMask mask = mask_from_tree(tree, root.w, root.h);
    RealPlane error(root.w, root.h, 0.0);
    for (const RealPlane* p : planes) {
      RealPlane f(root.w, root.h, 0.0);
      for (size_t i = 0; i < f.size(); ++i) {
        if (mask.test(i)) f[i] = (*p)[i];
      }
      const RealPlane u = solve_homogeneous(f, mask, options);
      for (size_t i = 0; i < u.size(); ++i) error[i] += ((*p)[i] - u[i]) * ((*p)[i] - u[i]);
    }
    const RegionStats err(error);
    const long long target = first + (k - first) * round / rounds;
    refine_by_error(tree, static_cast<int>(target),
                    [&](const Rect& r) { return err.sum(r); });
  }
  return tree;
}

}  // namespace

GopStructure::GopStructure(int size) : gop_size(size) {
  if (size < 1) throw InvalidArgument("gop_size must be >= 1");
}

CascadicOptions intra_solver_options() {
  CascadicOptions o;
  o.tolerance = 1e-4;
  o.coarse_tolerance = 1e-3;
  o.max_iterations = 1500;
  o.throw_on_failure = false;
  return o;
}

IntraData analyze_intra(const Frame& frame, const IntraParams& params) {
  check_channels(frame.channels());
  const long long pixels = static_cast<long long>(frame.width) * frame.height;
  if (params.luma_points < 1) throw InvalidArgument("intra: budget must be >= 1");
  if (!(params.chroma_ratio > 0.0 && params.chroma_ratio <= 1.0)) {
    throw InvalidArgument("intra: chroma_ratio must be in (0, 1]");
  }
  IntraData d;
  d.width = frame.width;
  d.height = frame.height;
  const Rect root{0, 0, frame.width, frame.height};
  const long long k = std::min(params.luma_points, pixels);

  const int rounds = params.leaf_means ? 0 : params.mask_rounds;
  const RealPlane y = to_real(frame.planes[0]);
  {
    const RealPlane* luma[] = {&y};
    d.luma_tree = build_intra_tree(root, k, luma, rounds);
  }
  if (frame.channels() == 3) {
    const RealPlane u = to_real(frame.planes[1]);
    const RealPlane v = to_real(frame.planes[2]);
    const RealPlane* uv[] = {&u, &v};
    const long long kc = std::clamp<long long>(
        static_cast<long long>(std::ceil(k * params.chroma_ratio)), 1, pixels);
    d.chroma_tree = build_intra_tree(root, kc, uv, rounds);
  }

  for (int c = 0; c < frame.channels(); ++c) {
    const SubdivisionTree& tree = tree_for(d, c);
    const auto leaves = tree.leaves();
    const RealPlane original = to_real(frame.planes[c]);
    std::vector<double> real_values(leaves.size());
    std::optional<RegionStats> stats;
    if (params.leaf_means) stats.emplace(original);
    for (size_t i = 0; i < leaves.size(); ++i) {
      if (stats) {
        real_values[i] = stats->mean(leaves[i]);
      } else {
        const auto [px, py] = leaf_point(leaves[i]);
        real_values[i] = original.at(px, py);
      }
    }
    if (params.tonal_iterations > 0 && leaves.size() > 1) {
      const InpaintingMask mask = mask_from_tree(tree, d.width, d.height);
      const CascadicOptions options = intra_solver_options();
      for (int it = 0; it < params.tonal_iterations; ++it) {
        RealPlane f(d.width, d.height, 0.0);
        for (size_t i = 0; i < leaves.size(); ++i) {
          const auto [px, py] = leaf_point(leaves[i]);
          f.at(px, py) = real_values[i];
        }
        const RealPlane u = solve_homogeneous(f, mask, options);
        RealPlane error(d.width, d.height);
        for (size_t i = 0; i < u.size(); ++i) error[i] = original[i] - u[i];
        const RegionStats err(error);
        for (size_t i = 0; i < leaves.size(); ++i) {
          real_values[i] = std::clamp(real_values[i] + err.mean(leaves[i]),
                                      static_cast<double>(channel_min(c)),
                                      static_cast<double>(channel_max(c)));
        }
      }
    }
    std::vector<int> values(leaves.size());
    for (size_t i = 0; i < leaves.size(); ++i) {
      values[i] = static_cast<int>(std::lround(real_values[i]));
    }
    IntraChannel ch;
    ch.lo = *std::min_element(values.begin(), values.end());
    ch.hi = *std::max_element(values.begin(), values.end());
    const UniformQuantizer q(ch.lo, ch.hi, params.levels);
    ch.indices.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i) ch.indices[i] = q.quantize(values[i]);
    d.channels.push_back(std::move(ch));
  }
  return d;
}

std::vector<uint8_t> IntraData::serialize() const {
  ByteWriter w;
  for (const auto& ch : channels) {
    w.put_i16(static_cast<int16_t>(ch.lo));
    w.put_i16(static_cast<int16_t>(ch.hi));
  }
  BitWriter bits;
  luma_tree.write(bits);
  if (channels.size() == 3) chroma_tree.write(bits);
  w.put_block(bits.bytes());
  std::vector<int32_t> all;
  for (const auto& ch : channels) all.insert(all.end(), ch.indices.begin(), ch.indices.end());
  encode_integers(dpcm_forward(all), w);
  return w.take();
}

IntraData IntraData::parse(std::span<const uint8_t> bytes, int width, int height,
                           int channels, int levels) {
  check_channels(channels);
  ByteReader r(bytes);
  IntraData d;
  d.width = width;
  d.height = height;
  d.channels.resize(channels);
  for (int c = 0; c < channels; ++c) {
    auto& ch = d.channels[c];
    ch.lo = r.get_i16();
    ch.hi = r.get_i16();
    if (ch.lo > ch.hi || ch.lo < channel_min(c) || ch.hi > channel_max(c)) {
      throw DecodeError("intra payload: bad value range");
    }
  }
  const Rect root{0, 0, width, height};
  {
    const auto tree_bytes = r.get_block();
    BitReader br(tree_bytes);
    d.luma_tree = SubdivisionTree::read(root, br);
    if (channels == 3) d.chroma_tree = SubdivisionTree::read(root, br);
    if (br.remaining() >= 8) throw DecodeError("intra payload: trailing tree bytes");
  }
  size_t total = 0;
  std::vector<size_t> counts(channels);
  for (int c = 0; c < channels; ++c) {
    counts[c] = tree_for(d, c).leaf_count();
    total += counts[c];
  }
  const auto deltas = decode_integers(r, total);
  if (deltas.size() != total) throw DecodeError("intra payload: value count mismatch");
  if (!r.at_end()) throw DecodeError("intra payload: trailing bytes");
  const auto all = dpcm_inverse(deltas);
  size_t pos = 0;
  for (int c = 0; c < channels; ++c) {
    auto& idx = d.channels[c].indices;
    idx.assign(all.begin() + pos, all.begin() + pos + counts[c]);
    pos += counts[c];
    for (int32_t i : idx) {
      if (i < 0 || i >= levels) throw DecodeError("intra payload: index out of range");
    }
  }
  return d;
}

Frame decode_intra(const IntraData& data, int levels, ColorSpace space,
                   SolveStats* luma_stats) {
  const int channels = static_cast<int>(data.channels.size());
  Frame out(data.width, data.height, channels, space);
  const CascadicOptions options = intra_solver_options();
  for (int c = 0; c < channels; ++c) {
    const SubdivisionTree& tree = tree_for(data, c);
    const InpaintingMask mask = mask_from_tree(tree, data.width, data.height);
    const auto values = dequantized(data.channels[c], levels);
    const auto leaves = tree.leaves();
    RealPlane f(data.width, data.height, 0.0);
    for (size_t i = 0; i < leaves.size(); ++i) {
      const auto [px, py] = leaf_point(leaves[i]);
      f.at(px, py) = values[i];
    }
    const RealPlane u = solve_homogeneous(f, mask, options, c == 0 ? luma_stats : nullptr);
    IntPlane& p = out.planes[c];
    for (size_t i = 0; i < u.size(); ++i) p[i] = clamp_channel(u[i], c);
  }
  return out;
}

Frame decode_intra_piecewise(const IntraData& data, int levels,
                             ColorSpace space) {
  const int channels = static_cast<int>(data.channels.size());
  Frame out(data.width, data.height, channels, space);
  for (int c = 0; c < channels; ++c) {
    RealPlane painted(data.width, data.height, 0.0);
    paint_leaves(tree_for(data, c), dequantized(data.channels[c], levels), painted);
    for (size_t i = 0; i < painted.size(); ++i) {
      out.planes[c][i] = clamp_channel(painted[i], c);
    }
  }
  return out;
}

IntraPrediction predict_intra(const Frame& frame, const IntraParams& params) {
  IntraPrediction out;
  out.payload = analyze_intra(frame, params).serialize();
  const IntraData parsed = IntraData::parse(out.payload, frame.width, frame.height,
                                            frame.channels(), params.levels);
  out.prediction = decode_intra(parsed, params.levels, frame.space);
  return out;
}

Frame predict_inter(const Frame& prev, const FlowField& flow) {
  if (prev.width != flow.width() || prev.height != flow.height()) {
    throw InvalidArgument("predict_inter: flow and frame sizes differ");
  }
  Frame out(prev.width, prev.height, prev.channels(), prev.space);
  for (int c = 0; c < prev.channels(); ++c) {
    const RealPlane w = warp_plane(to_real(prev.planes[c]), flow);
    for (size_t i = 0; i < w.size(); ++i) out.planes[c][i] = clamp_channel(w[i], c);
  }
  return out;
}

}  // namespace hivc
