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

#include "hivc/residual.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "hivc/bitio.h"
#include "hivc/entropy.h"
#include "hivc/error.h"
#include "hivc/parallel.h"
#include "hivc/quantize.h"
#include "hivc/subdivision.h"

namespace hivc {
namespace {

using Forest = std::vector<std::optional<SubdivisionTree>>;

constexpr double kExactAScale = 64.0;

BlockMask tree_mask(const SubdivisionTree& tree) {
  const Rect& root = tree.root();
  BlockMask m = 0;
  for (const Rect& leaf : tree.leaves()) {
    const auto [x, y] = leaf_point(leaf);
    m |= block_bit(x - root.x, y - root.y);
  }
  return m;
}

std::vector<Rect> block_roots(const BlockGrid& grid) {
  std::vector<Rect> roots(grid.count());
  for (int i = 0; i < grid.count(); ++i) roots[i] = grid.block_rect(i);
  return roots;
}

// Channel groups: luma alone, then U and V sharing one forest.
std::vector<std::vector<int>> channel_groups(int channels) {
  if (channels == 1) return {{0}};
  if (channels == 3) return {{0}, {1, 2}};
  throw InvalidArgument("residual: 1 or 3 channels required");
}

// Mean over the true (uncropped) pixels of r - u.
double block_mean_difference(const Block8& r, const Block8& u, const Rect& rect) {
  double s = 0.0;
  for (int y = 0; y < rect.h; ++y) {
    for (int x = 0; x < rect.w; ++x) s += r[8 * y + x] - u[8 * y + x];
  }
  return s / static_cast<double>(rect.area());
}

bool near_integer(double v) { return std::abs(v - std::nearbyint(v)) < 1e-6; }

}  // namespace

std::vector<uint8_t> encode_residual(std::span<const ResidualPlane> residual,
                                     const ResidualParams& params,
                                     const GreensKernel& kernel) {
  const int channels = static_cast<int>(residual.size());
  const auto groups = channel_groups(channels);
  const int w = residual[0].width();
  const int h = residual[0].height();
  for (const auto& p : residual) {
    if (p.width() != w || p.height() != h) {
      throw InvalidArgument("residual: channel sizes differ");
    }
  }
  if (!(params.points_per_block >= 0.0 && params.points_per_block <= 64.0)) {
    throw InvalidArgument("residual: points_per_block must be in [0, 64]");
  }
  if (!(params.chroma_ratio > 0.0 && params.chroma_ratio <= 1.0)) {
    throw InvalidArgument("residual: chroma_ratio must be in (0, 1]");
  }
  const DeadZoneQuantizer q(params.levels);

  const BlockGrid grid(w, h);
  const int n = grid.count();
  const auto roots = block_roots(grid);
  const long long capacity = static_cast<long long>(w) * h;
  const long long luma_budget = std::clamp<long long>(
      std::llround(params.points_per_block * n), 0, capacity);

  std::vector<RealPlane> real;
  for (const auto& p : residual) real.push_back(to_real(p));

  std::vector<Forest> forests;
  for (size_t g = 0; g < groups.size(); ++g) {
    std::vector<const RealPlane*> ps;
    for (int c : groups[g]) ps.push_back(&real[c]);
    const RegionStats stats(ps);
    const long long budget =
        g == 0 ? luma_budget
               : std::min<long long>(
                     capacity, static_cast<long long>(std::ceil(
                                   luma_budget * params.chroma_ratio)));
    forests.push_back(subdivide_forest(
        roots, budget, [&](const Rect& r) { return stats.energy(r); },
        [&](const Rect& r) { return stats.ssd(r); }));
  }

  // Unquantized fits.
  std::vector<std::vector<BlockCoefficients>> fits(channels,
                                                   std::vector<BlockCoefficients>(n));
  std::vector<std::vector<Block8>> blocks(channels, std::vector<Block8>(n));
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    errors.capture(i, [&] {
      for (size_t g = 0; g < groups.size(); ++g) {
        if (!forests[g][i]) continue;
        const BlockMask mask = tree_mask(*forests[g][i]);
        for (int c : groups[g]) {
          blocks[c][i] = extract_block(residual[c], grid, i);
          fits[c][i] = solve_block_coefficients(blocks[c][i], mask, kernel);
        }
      }
    });
  }
  errors.rethrow_if_any();

  std::vector<double> all_c;
  for (const auto& ch : fits) {
    for (const auto& b : ch) {
      if (b.k() >= 2) all_c.insert(all_c.end(), b.c.begin(), b.c.end());
    }
  }
  // Integer mode: with 256 levels and all-integer c (a full mask on an
  // integer residual), c is stored as is and a in 1/64 units. Signalled by
  // a zero c scale. This is what makes the full-mask configuration lossless.
  bool exact = q.max_index() == 127 && !all_c.empty();
  for (double c : all_c) {
    if (!exact) break;
    exact = near_integer(c) && std::abs(c) <= kMaxCategoryValue;
  }
  const uint32_t scale_c_fixed =
      exact ? 0 : scale_to_fixed(all_c.empty() ? 1.0 : coefficient_scale(all_c));
  const double scale_c = exact ? 0.0 : scale_from_fixed(scale_c_fixed);

  // Quantize c, then refit a over the block's true pixels.
  std::vector<std::vector<std::vector<int32_t>>> c_idx(
      channels, std::vector<std::vector<int32_t>>(n));
  std::vector<std::vector<double>> a_fit(channels, std::vector<double>(n, 0.0));
  std::vector<double> all_a;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int i = 0; i < n; ++i) {
      if (!forests[g][i]) continue;
      for (int c : groups[g]) {
        BlockCoefficients& b = fits[c][i];
        auto& idx = c_idx[c][i];
        if (b.k() >= 2) {
          idx.resize(b.k());
          for (int j = 0; j < b.k(); ++j) {
            if (exact) {
              idx[j] = static_cast<int32_t>(std::nearbyint(b.c[j]));
              b.c[j] = idx[j];
            } else {
              idx[j] = q.quantize(map_coefficient(b.c[j], scale_c));
              b.c[j] = unmap_coefficient(q.dequantize(idx[j]), scale_c);
            }
          }
        } else {
          idx.assign(1, 0);
          b.c.assign(1, 0.0);
        }
        BlockCoefficients no_a = b;
        no_a.a = 0.0;
        const Block8 u = reconstruct_block(no_a, kernel);
        a_fit[c][i] = block_mean_difference(blocks[c][i], u, grid.block_rect(i));
        all_a.push_back(a_fit[c][i]);
      }
    }
  }
  const uint32_t scale_a_fixed =
      exact ? 0 : scale_to_fixed(all_a.empty() ? 1.0 : coefficient_scale(all_a));
  const double scale_a = scale_from_fixed(scale_a_fixed);
  std::vector<std::vector<int32_t>> a_idx(channels, std::vector<int32_t>(n, 0));
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < n; ++i) {
      a_idx[c][i] = exact ? static_cast<int32_t>(std::clamp<double>(
                                std::nearbyint(a_fit[c][i] * kExactAScale),
                                -kMaxCategoryValue, kMaxCategoryValue))
                          : q.quantize(map_coefficient(a_fit[c][i], scale_a));
    }
  }

  // Drop coded blocks whose squared-error reduction does not pay for their
  // estimated bits.
  if (!exact && params.rd_lambda > 0.0) {
    auto index_bits = [](int32_t v) {
      return v == 0 ? 1.0 : 2.0 + 2.0 * std::bit_width(static_cast<uint32_t>(std::abs(v)));
    };
    for (size_t g = 0; g < groups.size(); ++g) {
#pragma omp parallel for schedule(dynamic, 8)
      for (int i = 0; i < n; ++i) {
        auto& tree = forests[g][i];
        if (!tree) continue;
        const Rect rect = grid.block_rect(i);
        double gain = 0.0;
        double bits = 2.0 * tree->leaf_count() + 1.0;
        for (int c : groups[g]) {
          BlockCoefficients b = fits[c][i];
          b.a = exact ? 0.0 : unmap_coefficient(q.dequantize(a_idx[c][i]), scale_a);
          if (b.k() < 2) b.c.assign(b.k(), 0.0);
          const Block8 u = reconstruct_block(b, kernel);
          for (int y = 0; y < rect.h; ++y) {
            for (int x = 0; x < rect.w; ++x) {
              const double r = blocks[c][i][8 * y + x];
              const double e = r - std::nearbyint(u[8 * y + x]);
              gain += r * r - e * e;
            }
          }
          if (tree->leaf_count() >= 2) {
            for (int32_t v : c_idx[c][i]) bits += index_bits(v);
          }
          bits += index_bits(a_idx[c][i]);
        }
        if (gain < params.rd_lambda * bits) {
          for (int c : groups[g]) {
            std::fill(c_idx[c][i].begin(), c_idx[c][i].end(), 0);
            a_idx[c][i] = 0;
          }
        }
      }
    }
  }

  // Blocks whose coefficients all vanish collapse to a single leaf (the
  // constant a); if a vanishes too they become skip blocks.
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int i = 0; i < n; ++i) {
      auto& tree = forests[g][i];
      if (!tree) continue;
      bool zero_c = true, zero_a = true;
      for (int c : groups[g]) {
        for (int32_t v : c_idx[c][i]) zero_c = zero_c && v == 0;
        zero_a = zero_a && a_idx[c][i] == 0;
      }
      if (zero_c && tree->leaf_count() > 1) tree.emplace(roots[i]);
      if (zero_c && zero_a) tree.reset();
    }
  }

  ByteWriter out;
  out.put_u32(scale_c_fixed);
  out.put_u32(scale_a_fixed);
  // Skip flags as runs of skipped blocks before each coded block; the
  // trailing run is implied by the block count.
  BitWriter bits;
  for (const auto& forest : forests) {
    std::vector<int32_t> runs;
    int32_t run = 0;
    for (const auto& tree : forest) {
      if (!tree) {
        ++run;
        continue;
      }
      runs.push_back(run);
      run = 0;
      tree->write(bits);
    }
    encode_integers(runs, out);
  }
  out.put_block(bits.bytes());
  std::vector<int32_t> cs, as;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int c : groups[g]) {
      for (int i = 0; i < n; ++i) {
        const auto& tree = forests[g][i];
        if (!tree) continue;
        if (tree->leaf_count() >= 2) {
          cs.insert(cs.end(), c_idx[c][i].begin(), c_idx[c][i].end());
        }
        as.push_back(a_idx[c][i]);
      }
    }
  }
  encode_integers(cs, out);
  encode_integers(as, out);
  return out.take();
}

ResidualData ResidualData::parse(std::span<const uint8_t> bytes, int width,
                                 int height, int channels, int levels) {
  std::optional<DeadZoneQuantizer> q;
  try {
    q.emplace(levels);
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("residual payload: ") + e.what());
  }
  const auto groups = channel_groups(channels);
  ByteReader r(bytes);
  ResidualData d;
  d.width = width;
  d.height = height;
  d.scale_c = r.get_u32();
  d.scale_a = r.get_u32();
  const bool exact = d.scale_c == 0;
  if (exact != (d.scale_a == 0)) throw DecodeError("residual payload: zero scale");
  if (exact && q->max_index() != 127) {
    throw DecodeError("residual payload: integer mode needs 256 levels");
  }

  const BlockGrid grid(width, height);
  const int n = grid.count();
  const auto roots = block_roots(grid);
  std::vector<Forest> forests(groups.size(), Forest(n));
  {
    std::vector<std::vector<int32_t>> runs;
    for (size_t g = 0; g < groups.size(); ++g) {
      runs.push_back(decode_integers(r, static_cast<size_t>(n)));
    }
    const auto tree_bytes = r.get_block();
    BitReader br(tree_bytes);
    for (size_t g = 0; g < groups.size(); ++g) {
      long long i = 0;
      for (int32_t run : runs[g]) {
        if (run < 0 || i + run >= n) throw DecodeError("residual payload: bad skip run");
        i += run;
        forests[g][i] = SubdivisionTree::read(roots[i], br);
        ++i;
      }
    }
    if (br.remaining() >= 8) throw DecodeError("residual payload: trailing tree bytes");
  }
  size_t n_c = 0, n_a = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (const auto& tree : forests[g]) {
      if (!tree) continue;
      n_a += groups[g].size();
      if (tree->leaf_count() >= 2) n_c += groups[g].size() * tree->leaf_count();
    }
  }
  const auto cs = decode_integers(r, n_c);
  const auto as = decode_integers(r, n_a);
  if (cs.size() != n_c || as.size() != n_a) {
    throw DecodeError("residual payload: coefficient count mismatch");
  }
  if (!r.at_end()) throw DecodeError("residual payload: trailing bytes");
  const int limit = exact ? kMaxCategoryValue : q->max_index();
  for (const auto* v : {&cs, &as}) {
    for (int32_t x : *v) {
      if (x < -limit || x > limit) throw DecodeError("residual payload: index out of range");
    }
  }

  const double scale_c = scale_from_fixed(d.scale_c);
  const double scale_a = scale_from_fixed(d.scale_a);
  auto c_value = [&](int32_t i) {
    return exact ? static_cast<double>(i) : unmap_coefficient(q->dequantize(i), scale_c);
  };
  auto a_value = [&](int32_t i) {
    return exact ? i / kExactAScale : unmap_coefficient(q->dequantize(i), scale_a);
  };
  d.channels.assign(channels, std::vector<BlockCoefficients>(n));
  size_t pc = 0, pa = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int c : groups[g]) {
      for (int i = 0; i < n; ++i) {
        const auto& tree = forests[g][i];
        if (!tree) continue;
        BlockCoefficients& b = d.channels[c][i];
        b.mask = tree_mask(*tree);
        const int k = tree->leaf_count();
        if (k >= 2) {
          b.c.resize(k);
          for (int j = 0; j < k; ++j) {
            b.c[j] = c_value(cs[pc++]);
          }
        } else {
          b.c.assign(1, 0.0);
        }
        b.a = a_value(as[pa++]);
      }
    }
  }
  return d;
}

std::vector<RealPlane> reconstruct_residual(const ResidualData& data,
                                            const GreensKernel& kernel) {
  const BlockGrid grid(data.width, data.height);
  std::vector<RealPlane> out;
  for (const auto& ch : data.channels) out.push_back(reconstruct_plane(grid, ch, kernel));
  return out;
}

Frame apply_residual(const Frame& prediction, std::span<const RealPlane> residual) {
  if (static_cast<int>(residual.size()) != prediction.channels()) {
    throw InvalidArgument("apply_residual: channel count mismatch");
  }
  Frame out = prediction;
  for (int c = 0; c < prediction.channels(); ++c) {
    if (!residual[c].same_shape(prediction.planes[c])) {
      throw InvalidArgument("apply_residual: size mismatch");
    }
    const double lo = channel_min(c), hi = channel_max(c);
    IntPlane& p = out.planes[c];
    for (size_t i = 0; i < p.size(); ++i) {
      const double v = p[i] + std::nearbyint(residual[c][i]);
      p[i] = static_cast<int32_t>(std::clamp(v, lo, hi));
    }
  }
  return out;
}

std::vector<ResidualPlane> compute_residual(const Frame& original,
                                            const Frame& prediction) {
  if (original.channels() != prediction.channels() ||
      original.width != prediction.width || original.height != prediction.height) {
    throw InvalidArgument("compute_residual: frame mismatch");
  }
  std::vector<ResidualPlane> out;
  for (int c = 0; c < original.channels(); ++c) {
    ResidualPlane r(original.width, original.height);
    for (size_t i = 0; i < r.size(); ++i) {
      r[i] = original.planes[c][i] - prediction.planes[c][i];
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hivc
