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

#include "hivc/bitstream.h"

#include <algorithm>
#include <cstring>

#include "hivc/bitio.h"

namespace hivc {
namespace {

constexpr char kMagic[4] = {'H', 'I', 'V', 'C'};

// Splits one GOP record into payload views, throwing LengthMismatchError
// when the record does not hold exactly the expected payloads.
struct GopView {
  std::span<const uint8_t> intra;
  std::span<const uint8_t> intra_residual;
  std::vector<std::pair<std::span<const uint8_t>, std::span<const uint8_t>>>
      inter;
};

GopView split_gop(std::span<const uint8_t> record, size_t frames, size_t gop) {
  ByteReader r(record);
  GopView view;
  try {
    view.intra = r.get_block();
    view.intra_residual = r.get_block();
    for (size_t i = 1; i < frames; ++i) {
      auto flow = r.get_block();
      auto res = r.get_block();
      view.inter.emplace_back(flow, res);
    }
  } catch (const DecodeError&) {
    throw LengthMismatchError("GOP " + std::to_string(gop) +
                              ": payload lengths exceed the GOP record");
  }
  if (!r.at_end()) {
    throw LengthMismatchError("GOP " + std::to_string(gop) +
                              ": trailing bytes inside the GOP record");
  }
  return view;
}

template <typename Fn>
void walk_gops(std::span<const uint8_t> bytes, const StreamHeader& header,
               Fn&& fn) {
  ByteReader r(bytes.subspan(kHeaderBytes));
  const size_t gops = header.gop_count();
  for (size_t g = 0; g < gops; ++g) {
    const int last = static_cast<int>(g) - 1;
    if (r.remaining() < 4) {
      throw TruncatedStreamError(
          "stream ends before GOP " + std::to_string(g), last);
    }
    const uint32_t len = r.get_u32();
    if (len > r.remaining()) {
      throw TruncatedStreamError("GOP " + std::to_string(g) + " announces " +
                                     std::to_string(len) + " bytes, " +
                                     std::to_string(r.remaining()) + " remain",
                                 last);
    }
    const size_t offset = kHeaderBytes + r.position() - 4;
    fn(g, offset, r.get_bytes(len));
  }
  if (!r.at_end()) {
    throw LengthMismatchError(std::to_string(r.remaining()) +
                              " bytes after the last GOP");
  }
}

}  // namespace

size_t StreamHeader::gop_count() const {
  if (gop_size == 0) throw InvalidArgument("gop_size must be >= 1");
  return (frame_count + gop_size - 1) / gop_size;
}

size_t StreamHeader::frames_in_gop(size_t gop) const {
  const size_t start = gop * gop_size;
  return std::min<size_t>(gop_size, frame_count - start);
}

void StreamHeader::validate() const {
  if (width == 0 || height == 0) throw InvalidArgument("zero frame size");
  if (gop_size == 0) throw InvalidArgument("gop_size must be >= 1");
  if (fps_num == 0 || fps_den == 0) throw InvalidArgument("bad frame rate");
  for (int l : {intra_levels, flow_levels, residual_levels}) {
    if (l < 2 || l > 256) throw InvalidArgument("quantizer levels not in [2, 256]");
  }
}

std::vector<uint8_t> write_header(const StreamHeader& h) {
  h.validate();
  ByteWriter w;
  w.put_bytes({reinterpret_cast<const uint8_t*>(kMagic), 4});
  w.put_u8(kStreamVersion);
  w.put_u16(h.width);
  w.put_u16(h.height);
  w.put_u32(h.frame_count);
  w.put_u16(h.fps_num);
  w.put_u16(h.fps_den);
  w.put_u8(h.gop_size);
  w.put_u8(static_cast<uint8_t>(h.intra_levels - 1));
  w.put_u8(static_cast<uint8_t>(h.flow_levels - 1));
  w.put_u8(static_cast<uint8_t>(h.residual_levels - 1));
  return w.take();
}

StreamHeader read_header(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw BadMagicError();
  }
  if (bytes.size() < 5) throw TruncatedStreamError("truncated header", -1);
  if (bytes[4] != kStreamVersion) throw UnsupportedVersionError(bytes[4]);
  if (bytes.size() < kHeaderBytes) {
    throw TruncatedStreamError("truncated header", -1);
  }
  ByteReader r(bytes.subspan(5, kHeaderBytes - 5));
  StreamHeader h;
  h.width = r.get_u16();
  h.height = r.get_u16();
  h.frame_count = r.get_u32();
  h.fps_num = r.get_u16();
  h.fps_den = r.get_u16();
  h.gop_size = r.get_u8();
  h.intra_levels = r.get_u8() + 1;
  h.flow_levels = r.get_u8() + 1;
  h.residual_levels = r.get_u8() + 1;
  try {
    h.validate();
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("invalid header: ") + e.what());
  }
  return h;
}

std::vector<uint8_t> write_stream(const Stream& s) {
  s.header.validate();
  if (s.gops.size() != s.header.gop_count()) {
    throw InvalidArgument("GOP count does not match the header");
  }
  ByteWriter w;
  w.put_bytes(write_header(s.header));
  for (size_t g = 0; g < s.gops.size(); ++g) {
    const GopPayload& gop = s.gops[g];
    if (gop.inter.size() + 1 != s.header.frames_in_gop(g)) {
      throw InvalidArgument("GOP " + std::to_string(g) +
                            " frame count does not match the header");
    }
    ByteWriter body;
    body.put_block(gop.intra);
    body.put_block(gop.intra_residual);
    for (const auto& f : gop.inter) {
      body.put_block(f.flow);
      body.put_block(f.residual);
    }
    if (body.size() > UINT32_MAX) throw InvalidArgument("GOP too large");
    w.put_block(body.bytes());
  }
  return w.take();
}

Stream read_stream(std::span<const uint8_t> bytes) {
  Stream s;
  s.header = read_header(bytes);
  walk_gops(bytes, s.header, [&](size_t g, size_t, auto record) {
    const GopView v = split_gop(record, s.header.frames_in_gop(g), g);
    GopPayload gop;
    gop.intra.assign(v.intra.begin(), v.intra.end());
    gop.intra_residual.assign(v.intra_residual.begin(),
                              v.intra_residual.end());
    for (const auto& [flow, res] : v.inter) {
      gop.inter.push_back({{flow.begin(), flow.end()}, {res.begin(), res.end()}});
    }
    s.gops.push_back(std::move(gop));
  });
  return s;
}

size_t StreamLayout::total_bytes() const {
  size_t t = header_bytes;
  for (const auto& g : gops) t += g.total;
  return t;
}

StreamLayout inspect_stream(std::span<const uint8_t> bytes) {
  StreamLayout layout;
  layout.header = read_header(bytes);
  walk_gops(bytes, layout.header, [&](size_t g, size_t offset, auto record) {
    const size_t frames = layout.header.frames_in_gop(g);
    const GopView v = split_gop(record, frames, g);
    GopLayout gl;
    gl.offset = offset;
    gl.total = record.size() + 4;
    gl.frames = frames;
    gl.intra = v.intra.size();
    gl.intra_residual = v.intra_residual.size();
    for (const auto& [flow, res] : v.inter) {
      gl.flow += flow.size();
      gl.residual += res.size();
    }
    gl.framing = 4 + 4 * (2 + 2 * v.inter.size());
    layout.gops.push_back(gl);
  });
  return layout;
}

}  // namespace hivc
