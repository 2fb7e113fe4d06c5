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

#ifndef HIVC_BITSTREAM_H_
#define HIVC_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hivc/error.h"

namespace hivc {

inline constexpr uint8_t kStreamVersion = 1;
inline constexpr size_t kHeaderBytes = 21;

// Container failures. All derive from DecodeError.
class BadMagicError : public DecodeError {
 public:
  BadMagicError() : DecodeError("not an HIVC stream (bad magic)") {}
};

class UnsupportedVersionError : public DecodeError {
 public:
  explicit UnsupportedVersionError(int version)
      : DecodeError("unsupported stream version " + std::to_string(version)),
        version_(version) {}
  int version() const { return version_; }

 private:
  int version_;
};

class TruncatedStreamError : public DecodeError {
 public:
  // last_valid_gop is -1 when not even the first GOP is complete.
  TruncatedStreamError(const std::string& what, int last_valid_gop)
      : DecodeError(what), last_valid_gop_(last_valid_gop) {}
  int last_valid_gop() const { return last_valid_gop_; }

 private:
  int last_valid_gop_;
};

class LengthMismatchError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

struct StreamHeader {
  uint16_t width = 0;
  uint16_t height = 0;
  uint32_t frame_count = 0;
  uint16_t fps_num = 24;
  uint16_t fps_den = 1;
  uint8_t gop_size = 16;
  // Quantizer level counts, each in [2, 256].
  int intra_levels = 256;
  int flow_levels = 256;
  int residual_levels = 255;

  size_t gop_count() const;
  size_t frames_in_gop(size_t gop) const;
  void validate() const;
  bool operator==(const StreamHeader&) const = default;
};

struct InterPayload {
  std::vector<uint8_t> flow;
  std::vector<uint8_t> residual;
  bool operator==(const InterPayload&) const = default;
};

struct GopPayload {
  std::vector<uint8_t> intra;
  std::vector<uint8_t> intra_residual;
  std::vector<InterPayload> inter;
  bool operator==(const GopPayload&) const = default;
};

struct Stream {
  StreamHeader header;
  std::vector<GopPayload> gops;
  bool operator==(const Stream&) const = default;
};

std::vector<uint8_t> write_header(const StreamHeader& header);
StreamHeader read_header(std::span<const uint8_t> bytes);

std::vector<uint8_t> write_stream(const Stream& stream);
// Validates magic, version and every length prefix before use.
Stream read_stream(std::span<const uint8_t> bytes);

// Byte accounting of a stream. Every byte after the header is attributed to
// exactly one field, length prefixes included.
struct GopLayout {
  size_t offset = 0;
  size_t total = 0;
  size_t framing = 0;
  size_t intra = 0;
  size_t intra_residual = 0;
  size_t flow = 0;
  size_t residual = 0;
  size_t frames = 0;
};

struct StreamLayout {
  StreamHeader header;
  size_t header_bytes = kHeaderBytes;
  std::vector<GopLayout> gops;

  size_t total_bytes() const;
};

StreamLayout inspect_stream(std::span<const uint8_t> bytes);

}  // namespace hivc

#endif  // HIVC_BITSTREAM_H_
