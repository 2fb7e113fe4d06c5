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

#include "hivc/bitio.h"

#include <bit>
#include <cstring>
#include <string>

#include "hivc/error.h"

namespace hivc {

void BitWriter::put_bit(bool bit) {
  if (bits_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (bits_ % 8));
  ++bits_;
}

void BitWriter::put_bits(uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) put_bit((value >> i) & 1u);
}

BitReader::BitReader(std::span<const uint8_t> bytes, size_t bit_limit)
    : bytes_(bytes), limit_(bit_limit) {
  if (bit_limit > bytes.size() * 8) {
    throw DecodeError("bit reader: limit exceeds buffer");
  }
}

bool BitReader::get_bit() {
  if (pos_ >= limit_) throw DecodeError("bit stream truncated");
  const bool bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
  ++pos_;
  return bit;
}

uint64_t BitReader::get_bits(int count) {
  if (count < 0 || count > 64 || static_cast<size_t>(count) > remaining()) {
    throw DecodeError("bit stream truncated");
  }
  uint64_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
  return v;
}

void ByteWriter::put_u16(uint16_t v) {
  out_.push_back(static_cast<uint8_t>(v));
  out_.push_back(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::put_u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_f32(float v) { put_u32(std::bit_cast<uint32_t>(v)); }

void ByteWriter::put_varint(uint64_t v) {
  while (v >= 0x80) {
    out_.push_back(static_cast<uint8_t>(v | 0x80));
    v >>= 7;
  }
  out_.push_back(static_cast<uint8_t>(v));
}

void ByteWriter::put_bytes(std::span<const uint8_t> b) {
  out_.insert(out_.end(), b.begin(), b.end());
}

void ByteWriter::put_block(std::span<const uint8_t> b) {
  put_u32(static_cast<uint32_t>(b.size()));
  put_bytes(b);
}

uint8_t ByteReader::get_u8() { return get_bytes(1)[0]; }

uint16_t ByteReader::get_u16() {
  const auto b = get_bytes(2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint32_t ByteReader::get_u32() {
  const auto b = get_bytes(4);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

float ByteReader::get_f32() { return std::bit_cast<float>(get_u32()); }

uint64_t ByteReader::get_varint() {
  uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const uint8_t b = get_u8();
    v |= static_cast<uint64_t>(b & 0x7f) << shift;
    if (!(b & 0x80)) return v;
  }
  throw DecodeError("varint too long");
}

std::span<const uint8_t> ByteReader::get_bytes(size_t n) {
  if (n > remaining()) {
    throw DecodeError("byte stream truncated: need " + std::to_string(n) +
                      " bytes, " + std::to_string(remaining()) + " left");
  }
  const auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::span<const uint8_t> ByteReader::get_block() { return get_bytes(get_u32()); }

}  // namespace hivc
