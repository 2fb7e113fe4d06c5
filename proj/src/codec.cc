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

#include "hivc/codec.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "hivc/parallel.h"
#include "hivc/prediction.h"
#include "hivc/pseudodiff.h"
#include "hivc/residual.h"

namespace hivc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Pass {
  Stream stream;
  std::vector<Frame> recon;  // YUV
  size_t bytes = 0;
  size_t intra = 0;
  size_t flow = 0;
  size_t residual = 0;
  double multiplier = 1.0;
};

size_t stream_size(const Stream& s) {
  size_t n = kHeaderBytes;
  for (const auto& g : s.gops) {
    n += 4 + 8 + g.intra.size() + g.intra_residual.size();
    for (const auto& f : g.inter) n += 8 + f.flow.size() + f.residual.size();
  }
  return n;
}

Frame decode_residual_into(const Frame& prediction,
                           std::span<const uint8_t> payload, int levels) {
  const GreensKernel& kernel = GreensKernel::harmonic();
  const ResidualData data = ResidualData::parse(
      payload, prediction.width, prediction.height, prediction.channels(), levels);
  const auto res = reconstruct_residual(data, kernel);
  return apply_residual(prediction, res);
}

Pass encode_pass(const std::vector<Frame>& yuv,
                 const std::vector<FlowField>& flows, const EncoderConfig& cfg,
                 const StreamHeader& header, double multiplier) {
  const int w = header.width;
  const int h = header.height;
  const Budgets b = budgets_for(cfg, w, h, multiplier);
  const GreensKernel& kernel = GreensKernel::harmonic();
  const ResidualParams rp{b.residual_points, cfg.chroma_ratio, cfg.residual_levels,
                          cfg.residual_rd_lambda};
  const IntraParams ip{b.intra_points, cfg.chroma_ratio, cfg.intra_levels, false,
                       cfg.tonal_iterations, cfg.intra_mask_rounds};

  Pass pass;
  pass.multiplier = multiplier;
  pass.stream.header = header;
  for (size_t g = 0; g < header.gop_count(); ++g) {
    const size_t start = g * header.gop_size;
    const size_t frames = header.frames_in_gop(g);
    GopPayload gop;
    const IntraPrediction intra = predict_intra(yuv[start], ip);
    gop.intra = intra.payload;
    gop.intra_residual = encode_residual(
        compute_residual(yuv[start], intra.prediction), rp, kernel);
    Frame recon = decode_residual_into(intra.prediction, gop.intra_residual,
                                       cfg.residual_levels);
    pass.intra += gop.intra.size();
    pass.residual += gop.intra_residual.size();
    pass.recon.push_back(recon);
    for (size_t t = start + 1; t < start + frames; ++t) {
      InterPayload inter;
      inter.flow = compress_flow(flows[t], b.flow_leaves, cfg.flow_levels).serialize();
      const FlowField decoded =
          CompressedFlow::parse(inter.flow, w, h, cfg.flow_levels).decompress();
      const Frame pred = predict_inter(recon, decoded);
      inter.residual = encode_residual(compute_residual(yuv[t], pred), rp, kernel);
      recon = decode_residual_into(pred, inter.residual, cfg.residual_levels);
      pass.flow += inter.flow.size();
      pass.residual += inter.residual.size();
      pass.recon.push_back(recon);
      gop.inter.push_back(std::move(inter));
    }
    pass.stream.gops.push_back(std::move(gop));
  }
  pass.bytes = stream_size(pass.stream);
  return pass;
}

// Finds the multiplier whose pass size is closest to target_bytes. Sizes
// grow with the multiplier; the bracket is widened geometrically and then
// bisected in log space.
template <typename Run>
Pass search_multiplier(Run&& run, double target_bytes, double tolerance,
                       int* iterations) {
  std::optional<Pass> best;
  int count = 0;
  auto consider = [&](double m) {
    Pass p = run(m);
    ++count;
    const double err = std::abs(p.bytes / target_bytes - 1.0);
    const bool better =
        !best || err < std::abs(best->bytes / target_bytes - 1.0);
    const bool over = p.bytes > target_bytes;
    if (better) best = std::move(p);
    return std::pair<bool, double>{over, err};
  };
  double lo = 0.0, hi = 0.0;
  double m = 1.0;
  auto [over, err] = consider(m);
  if (err <= tolerance) {
    *iterations = count;
    return std::move(*best);
  }
  // Widen until the target is bracketed.
  for (int i = 0; i < 12; ++i) {
    if (over) {
      hi = m;
      m /= 4.0;
    } else {
      lo = m;
      m *= 4.0;
    }
    std::tie(over, err) = consider(m);
    if (err <= tolerance) break;
    if (over ? lo > 0.0 : hi > 0.0) {
      (over ? hi : lo) = m;
      break;
    }
  }
  if (err > tolerance && lo > 0.0 && hi > 0.0) {
    for (int i = 0; i < 24; ++i) {
      m = std::sqrt(lo * hi);
      std::tie(over, err) = consider(m);
      if (err <= tolerance || hi / lo < 1.0005) break;
      (over ? hi : lo) = m;
    }
  }
  *iterations = count;
  return std::move(*best);
}

std::vector<Frame> to_yuv(const Video& video) {
  std::vector<Frame> out;
  out.reserve(video.frames.size());
  for (const Frame& f : video.frames) out.push_back(rct_forward(f));
  return out;
}

StreamHeader header_for(const Video& video, const EncoderConfig& cfg) {
  StreamHeader h;
  h.width = static_cast<uint16_t>(video.info.width);
  h.height = static_cast<uint16_t>(video.info.height);
  h.frame_count = static_cast<uint32_t>(video.frames.size());
  h.fps_num = static_cast<uint16_t>(video.info.fps_num);
  h.fps_den = static_cast<uint16_t>(video.info.fps_den);
  h.gop_size = static_cast<uint8_t>(cfg.gop_size);
  h.intra_levels = cfg.intra_levels;
  h.flow_levels = cfg.flow_levels;
  h.residual_levels = cfg.residual_levels;
  h.validate();
  return h;
}

void check_video(const Video& video) {
  if (video.frames.empty()) throw InvalidArgument("encode: no frames");
  const int w = video.info.width;
  const int h = video.info.height;
  if (w < 1 || h < 1 || w > 65535 || h > 65535) {
    throw InvalidArgument("encode: frame size out of range");
  }
  if (video.info.fps_num < 1 || video.info.fps_num > 65535 ||
      video.info.fps_den < 1 || video.info.fps_den > 65535) {
    throw InvalidArgument("encode: frame rate out of range");
  }
  if (video.frames.size() > UINT32_MAX) throw InvalidArgument("encode: too many frames");
  for (size_t i = 0; i < video.frames.size(); ++i) {
    const Frame& f = video.frames[i];
    if (f.width != w || f.height != h || f.channels() != 3 ||
        f.space != ColorSpace::kRgb) {
      throw InvalidArgument("encode: frame " + std::to_string(i) +
                            " is not an RGB frame of the announced size");
    }
  }
}

std::vector<Frame> to_rgb(const std::vector<Frame>& yuv) {
  std::vector<Frame> out;
  out.reserve(yuv.size());
  for (const Frame& f : yuv) out.push_back(rct_inverse(f));
  return out;
}

}  // namespace

void EncoderConfig::validate() const {
  auto fail = [](const std::string& m) { throw InvalidArgument("config: " + m); };
  if (gop_size < 1 || gop_size > 255) fail("gop_size must be in [1, 255]");
  if (!(intra_density > 0.0 && intra_density <= 1.0)) fail("intra_density must be in (0, 1]");
  if (!(chroma_ratio > 0.0 && chroma_ratio <= 1.0)) fail("chroma_ratio must be in (0, 1]");
  if (!(flow_density > 0.0 && flow_density <= 1.0)) fail("flow_density must be in (0, 1]");
  if (!(residual_points >= 0.0 && residual_points <= 64.0)) {
    fail("residual_points must be in [0, 64]");
  }
  if (!(residual_rd_lambda >= 0.0 && std::isfinite(residual_rd_lambda))) {
    fail("residual_rd_lambda must be finite and >= 0");
  }
  if (tonal_iterations < 0 || tonal_iterations > 100) {
    fail("tonal_iterations must be in [0, 100]");
  }
  if (intra_mask_rounds < 0 || intra_mask_rounds > 16) {
    fail("intra_mask_rounds must be in [0, 16]");
  }
  if (intra_levels < 2 || intra_levels > 256) fail("intra_levels must be in [2, 256]");
  if (flow_levels < 2 || flow_levels > 256) fail("flow_levels must be in [2, 256]");
  if (residual_levels < 3 || residual_levels > 256) {
    fail("residual_levels must be in [3, 256]");
  }
  if (!(hs_alpha > 0.0) || hs_iterations < 1) fail("invalid Horn-Schunck parameters");
  if (target_ratio < 0.0 || !std::isfinite(target_ratio)) fail("target_ratio must be >= 0");
  if (!(ratio_tolerance > 0.0 && ratio_tolerance < 1.0)) {
    fail("ratio_tolerance must be in (0, 1)");
  }
}

Budgets budgets_for(const EncoderConfig& cfg, int width, int height,
                    double multiplier) {
  const long long pixels = static_cast<long long>(width) * height;
  Budgets b;
  b.intra_points = std::clamp<long long>(
      std::llround(cfg.intra_density * multiplier * pixels), 1, pixels);
  b.flow_leaves = static_cast<int>(std::clamp<long long>(
      std::llround(cfg.flow_density * multiplier * pixels), 1, pixels));
  b.residual_points = std::clamp(cfg.residual_points * multiplier, 0.0, 64.0);
  return b;
}

double compression_ratio(const VideoInfo& info, size_t frames, size_t bytes) {
  return 3.0 * info.width * info.height * static_cast<double>(frames) /
         static_cast<double>(bytes);
}

std::vector<FlowField> estimate_flows(const std::vector<Frame>& yuv,
                                      const EncoderConfig& cfg) {
  const GopStructure gop(cfg.gop_size);
  std::vector<FlowField> flows(yuv.size());
  const long long n = static_cast<long long>(yuv.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long t = 1; t < n; ++t) {
    if (gop.is_intra(t)) continue;
    errors.capture(t, [&] {
      const RealPlane cur = to_real(yuv[t].planes[0]);
      const RealPlane prev = to_real(yuv[t - 1].planes[0]);
      flows[t] = cfg.flow_method == FlowMethod::kBrox
                     ? flow_brox(cur, prev, cfg.brox)
                     : flow_horn_schunck(cur, prev, cfg.hs_alpha, cfg.hs_iterations);
    });
  }
  errors.rethrow_if_any();
  return flows;
}

EncodeResult encode(const Video& video, const EncoderConfig& cfg) {
  cfg.validate();
  check_video(video);
  const auto t0 = Clock::now();
  const std::vector<FlowField> flows = estimate_flows(to_yuv(video), cfg);
  const double flow_seconds = seconds_since(t0);
  EncodeResult result = encode(video, cfg, flows);
  result.stats.flow_seconds = flow_seconds;
  result.stats.encode_seconds = seconds_since(t0);
  return result;
}

EncodeResult encode(const Video& video, const EncoderConfig& cfg,
                    const std::vector<FlowField>& flows) {
  cfg.validate();
  check_video(video);
  const auto t0 = Clock::now();
  const StreamHeader header = header_for(video, cfg);
  const std::vector<Frame> yuv = to_yuv(video);
  const GopStructure gop(cfg.gop_size);
  if (flows.size() != yuv.size()) throw InvalidArgument("encode: flow count mismatch");
  for (size_t t = 0; t < yuv.size(); ++t) {
    if (!gop.is_intra(static_cast<long long>(t)) &&
        (flows[t].width() != header.width || flows[t].height() != header.height)) {
      throw InvalidArgument("encode: flow " + std::to_string(t) + " has the wrong size");
    }
  }

  EncodeResult result;

  auto run = [&](double m) { return encode_pass(yuv, flows, cfg, header, m); };
  Pass pass;
  if (cfg.target_ratio > 0.0) {
    const double target_bytes =
        compression_ratio(video.info, video.frames.size(), 1) / cfg.target_ratio;
    pass = search_multiplier(run, target_bytes, cfg.ratio_tolerance,
                             &result.stats.rate_iterations);
  } else {
    pass = run(1.0);
    result.stats.rate_iterations = 1;
  }
  result.bytes = write_stream(pass.stream);
  result.reconstruction = to_rgb(pass.recon);
  result.stats.multiplier = pass.multiplier;
  result.stats.intra_bytes = pass.intra;
  result.stats.flow_bytes = pass.flow;
  result.stats.residual_bytes = pass.residual;
  result.stats.encode_seconds = seconds_since(t0);
  return result;
}

DecodeResult decode(std::span<const uint8_t> bytes) {
  const auto t_start = Clock::now();
  DecodeResult out;
  const Stream stream = read_stream(bytes);
  const StreamHeader& h = stream.header;
  out.header = h;
  const int w = h.width;
  const int hh = h.height;
  const GreensKernel& kernel = GreensKernel::harmonic();
  DecodeStats& st = out.stats;

  long long frame = 0;
  auto guarded = [&](auto&& fn) {
    try {
      return fn();
    } catch (const CorruptStreamError&) {
      throw;
    } catch (const Error& e) {
      throw CorruptStreamError(e.what(), frame);
    }
  };
  auto residual_step = [&](const Frame& pred, std::span<const uint8_t> payload) {
    auto t = Clock::now();
    const ResidualData data = guarded([&] {
      return ResidualData::parse(payload, w, hh, 3, h.residual_levels);
    });
    st.residual_parse += seconds_since(t);
    t = Clock::now();
    const auto res = reconstruct_residual(data, kernel);
    Frame recon = apply_residual(pred, res);
    st.residual_dct += seconds_since(t);
    return recon;
  };

  std::vector<Frame> yuv;
  yuv.reserve(h.frame_count);
  for (const GopPayload& gop : stream.gops) {
    auto t = Clock::now();
    const IntraData intra = guarded(
        [&] { return IntraData::parse(gop.intra, w, hh, 3, h.intra_levels); });
    st.intra_parse += seconds_since(t);
    t = Clock::now();
    const Frame ipred = decode_intra(intra, h.intra_levels, ColorSpace::kYuv);
    st.intra_solve += seconds_since(t);
    Frame recon = residual_step(ipred, gop.intra_residual);
    yuv.push_back(recon);
    ++frame;
    for (const InterPayload& inter : gop.inter) {
      t = Clock::now();
      const FlowField flow = guarded([&] {
        return CompressedFlow::parse(inter.flow, w, hh, h.flow_levels).decompress();
      });
      st.flow_parse += seconds_since(t);
      t = Clock::now();
      const Frame pred = predict_inter(recon, flow);
      st.warp += seconds_since(t);
      recon = residual_step(pred, inter.residual);
      yuv.push_back(recon);
      ++frame;
    }
  }
  const auto tc = Clock::now();
  out.frames = to_rgb(yuv);
  st.color = seconds_since(tc);
  st.total = seconds_since(t_start);
  return out;
}

void self_check(const EncodeResult& encoded) {
  const DecodeResult d = decode(encoded.bytes);
  if (d.frames.size() != encoded.reconstruction.size()) {
    throw SelfCheckError("self-check: decoder produced " +
                         std::to_string(d.frames.size()) + " frames, encoder " +
                         std::to_string(encoded.reconstruction.size()));
  }
  for (size_t i = 0; i < d.frames.size(); ++i) {
    if (!(d.frames[i] == encoded.reconstruction[i])) {
      throw SelfCheckError("self-check: frame " + std::to_string(i) +
                           " differs between encoder and decoder");
    }
  }
}

BaselineResult encode_piecewise_baseline(const Video& video,
                                         const EncoderConfig& cfg,
                                         size_t target_bytes) {
  cfg.validate();
  check_video(video);
  const StreamHeader header = header_for(video, cfg);
  const std::vector<Frame> yuv = to_yuv(video);
  const std::vector<FlowField> flows = estimate_flows(yuv, cfg);
  const int w = header.width;
  const int h = header.height;

  // The baseline gets its own intra/flow split: every candidate share is
  // fitted to the byte target and the best PSNR wins.
  BaselineResult out;
  double best_psnr = -1.0;
  for (double share : {0.005, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32}) {
    EncoderConfig bc = cfg;
    bc.flow_density = std::min(1.0, share * cfg.intra_density);
    auto run = [&](double m) {
      const Budgets b = budgets_for(bc, w, h, m);
      const IntraParams ip{b.intra_points, bc.chroma_ratio, bc.intra_levels, true};
      Pass pass;
      pass.multiplier = m;
      pass.stream.header = header;
      for (size_t g = 0; g < header.gop_count(); ++g) {
        const size_t start = g * header.gop_size;
        GopPayload gop;
        gop.intra = analyze_intra(yuv[start], ip).serialize();
        Frame recon = decode_intra_piecewise(
            IntraData::parse(gop.intra, w, h, 3, bc.intra_levels), bc.intra_levels,
            ColorSpace::kYuv);
        pass.recon.push_back(recon);
        for (size_t t = start + 1; t < start + header.frames_in_gop(g); ++t) {
          InterPayload inter;
          inter.flow = compress_flow(flows[t], b.flow_leaves, bc.flow_levels).serialize();
          recon = predict_inter(
              recon, CompressedFlow::parse(inter.flow, w, h, bc.flow_levels).decompress());
          pass.recon.push_back(recon);
          gop.inter.push_back(std::move(inter));
        }
        pass.stream.gops.push_back(std::move(gop));
      }
      pass.bytes = stream_size(pass.stream);
      return pass;
    };
    int iterations = 0;
    Pass pass = search_multiplier(run, static_cast<double>(target_bytes),
                                  cfg.ratio_tolerance, &iterations);
    std::vector<Frame> rgb = to_rgb(pass.recon);
    const double p = sequence_psnr(video.frames, rgb);
    if (p > best_psnr) {
      best_psnr = p;
      out.reconstruction = std::move(rgb);
      out.bytes = pass.bytes;
      out.multiplier = pass.multiplier;
      out.flow_share = share;
    }
  }
  return out;
}

double sequence_psnr(const std::vector<Frame>& a, const std::vector<Frame>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidArgument("sequence_psnr: sequences differ in length");
  }
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += mse(a[i], b[i]);
  const double m = total / static_cast<double>(a.size());
  if (m == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

}  // namespace hivc
