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

#ifndef HIVC_BITIO_H_
#define HIVC_BITIO_H_

#include <cstdint>
#include <span>
#include <vector>

namespace hivc {

// MSB-first bit packer.
class BitWriter {
 public:
  void put_bit(bool bit);
  // Writes the low `count` bits of `value`, most significant first.
  void put_bits(uint64_t value, int count);

  size_t bit_count() const { return bits_; }
  // Pads the final byte with zeros.
  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<uint8_t> bytes_;
  size_t bits_ = 0;
};

// Bounds-checked reader for BitWriter output. Reading past `bit_limit`
// throws DecodeError.
class BitReader {
 public:
  BitReader(std::span<const uint8_t> bytes, size_t bit_limit);
  explicit BitReader(std::span<const uint8_t> bytes)
      : BitReader(bytes, bytes.size() * 8) {}

  bool get_bit();
  uint64_t get_bits(int count);
  size_t position() const { return pos_; }
  size_t remaining() const { return limit_ - pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t limit_;
  size_t pos_ = 0;
};

// Little-endian byte serializer.
class ByteWriter {
 public:
  void put_u8(uint8_t v) { out_.push_back(v); }
  void put_u16(uint16_t v);
  void put_u32(uint32_t v);
  void put_i16(int16_t v) { put_u16(static_cast<uint16_t>(v)); }
  void put_f32(float v);
  void put_varint(uint64_t v);
  void put_bytes(std::span<const uint8_t> b);
  // u32 length prefix followed by the bytes.
  void put_block(std::span<const uint8_t> b);

  size_t size() const { return out_.size(); }
  std::vector<uint8_t>& bytes() { return out_; }
  std::vector<uint8_t> take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

// Bounds-checked little-endian reader; every failure throws DecodeError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t get_u8();
  uint16_t get_u16();
  uint32_t get_u32();
  int16_t get_i16() { return static_cast<int16_t>(get_u16()); }
  float get_f32();
  uint64_t get_varint();
  std::span<const uint8_t> get_bytes(size_t n);
  std::span<const uint8_t> get_block();

  size_t position() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace hivc

#endif  // HIVC_BITIO_H_
