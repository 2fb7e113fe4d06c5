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

#ifndef HIVC_ENTROPY_H_
#define HIVC_ENTROPY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hivc/bitio.h"

namespace hivc {

inline constexpr int kMaxCategoryValue = (1 << 15) - 1;
inline constexpr int kCategoryCount = 16;

// JPEG magnitude category: k = bit length of |v|, followed by k raw bits.
// Negative values are stored as v + 2^k - 1.
struct CategorySymbol {
  int category = 0;
  uint32_t bits = 0;

  bool operator==(const CategorySymbol&) const = default;
};

CategorySymbol to_category(int v);
int from_category(int category, uint32_t bits);
inline int from_category(const CategorySymbol& s) {
  return from_category(s.category, s.bits);
}

inline constexpr int kMinTableLog = 5;
inline constexpr int kMaxTableLog = 12;

// Scales a histogram to counts summing to 2^table_log. Largest remainder;
// every present symbol keeps at least 1. Overshoot caused by that floor is
// taken back from the largest counts, lowest index first on ties.
std::vector<uint32_t> normalize_counts(std::span<const uint64_t> histogram,
                                       int table_log);

// Table size heuristic for `symbols` coded values over `present` distinct
// symbols.
int choose_table_log(size_t symbols, size_t present);

// tANS tables for one normalized distribution.
class FseTable {
 public:
  // Throws InvalidArgument unless the counts sum to 2^table_log, table_log
  // is in range and at least one count is nonzero.
  FseTable(std::span<const uint32_t> normalized, int table_log);

  // Builds from a raw histogram through normalize_counts.
  static FseTable from_histogram(std::span<const uint64_t> histogram,
                                 int table_log);

  int table_log() const { return table_log_; }
  size_t alphabet_size() const { return counts_.size(); }
  const std::vector<uint32_t>& counts() const { return counts_; }

  // Symbol at each table slot after spreading.
  const std::vector<uint16_t>& spread() const { return spread_; }

  // Encoder transition: state in [R, 2R) for symbol s with reduced state x
  // in [count, 2 count).
  uint32_t encode_state(int symbol, uint32_t x) const {
    return encode_[start_[symbol] + x - counts_[symbol]];
  }

  struct DecodeEntry {
    uint16_t symbol;
    uint8_t bits;
    uint32_t base;  // next state before the read bits are added
  };
  const DecodeEntry& decode_entry(uint32_t slot) const { return decode_[slot]; }

 private:
  int table_log_;
  std::vector<uint32_t> counts_;
  std::vector<uint16_t> spread_;
  std::vector<uint32_t> start_;
  std::vector<uint32_t> encode_;
  std::vector<DecodeEntry> decode_;
};

// Raw tANS over symbols in [0, alphabet). The output begins with the final
// encoder state (table_log bits) and is read strictly forward.
std::vector<uint8_t> fse_encode(std::span<const uint16_t> symbols,
                                const FseTable& table);
std::vector<uint16_t> fse_decode(std::span<const uint8_t> bytes,
                                 const FseTable& table, size_t count);

// Self-describing payload for an integer sequence: category symbols through
// tANS, extra bits raw.
//   [table_log u8, 0 = empty][varint count][varint alphabet]
//   [varint normalized counts][u32 len][tANS bytes][u32 len][extra bytes]
std::vector<uint8_t> encode_integers(std::span<const int32_t> values);
void encode_integers(std::span<const int32_t> values, ByteWriter& out);
// Rejects payloads announcing more than `max_count` values.
std::vector<int32_t> decode_integers(ByteReader& in, size_t max_count);
std::vector<int32_t> decode_integers(std::span<const uint8_t> bytes,
                                     size_t max_count);

// Previous-value differences, first element against 0.
std::vector<int32_t> dpcm_forward(std::span<const int32_t> values);
std::vector<int32_t> dpcm_inverse(std::span<const int32_t> deltas);

// Order-0 entropy of a symbol stream in bits per symbol.
double empirical_entropy(std::span<const uint16_t> symbols);

}  // namespace hivc

#endif  // HIVC_ENTROPY_H_
