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

#include "hivc/entropy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hivc/error.h"

namespace hivc {

CategorySymbol to_category(int v) {
  if (v > kMaxCategoryValue || v < -kMaxCategoryValue) {
    throw InvalidArgument("value " + std::to_string(v) +
                          " exceeds the category range");
  }
  if (v == 0) return {};
  const uint32_t mag = static_cast<uint32_t>(v < 0 ? -v : v);
  const int k = std::bit_width(mag);
  const uint32_t bits =
      v < 0 ? static_cast<uint32_t>(v + (1 << k) - 1) : mag;
  return {k, bits};
}

int from_category(int category, uint32_t bits) {
  if (category < 0 || category >= kCategoryCount) {
    throw DecodeError("category out of range");
  }
  if (category == 0) return 0;
  if (bits >> category) throw DecodeError("extra bits exceed category");
  // Top bit set means the positive half.
  if (bits >> (category - 1)) return static_cast<int>(bits);
  return static_cast<int>(bits) - (1 << category) + 1;
}

std::vector<uint32_t> normalize_counts(std::span<const uint64_t> histogram,
                                       int table_log) {
  if (table_log < kMinTableLog || table_log > kMaxTableLog) {
    throw InvalidArgument("table_log out of range");
  }
  const uint64_t total =
      std::accumulate(histogram.begin(), histogram.end(), uint64_t{0});
  if (total == 0) throw InvalidArgument("empty histogram");
  const size_t present = static_cast<size_t>(std::count_if(
      histogram.begin(), histogram.end(), [](uint64_t c) { return c > 0; }));
  const int64_t size = int64_t{1} << table_log;
  if (static_cast<int64_t>(present) > size) {
    throw InvalidArgument("more symbols than table slots");
  }

  const size_t n = histogram.size();
  std::vector<uint32_t> out(n, 0);
  std::vector<double> remainder(n, -1.0);
  int64_t assigned = 0;
  for (size_t s = 0; s < n; ++s) {
    if (histogram[s] == 0) continue;
    const double ideal = static_cast<double>(histogram[s]) *
                         static_cast<double>(size) / static_cast<double>(total);
    const double fl = std::floor(ideal);
    out[s] = static_cast<uint32_t>(std::max(1.0, fl));
    remainder[s] = fl >= 1.0 ? ideal - fl : -1.0;
    assigned += out[s];
  }

  if (assigned < size) {
    std::vector<size_t> order;
    for (size_t s = 0; s < n; ++s) {
      if (histogram[s] > 0) order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return remainder[a] > remainder[b];
    });
    size_t i = 0;
    while (assigned < size) {
      ++out[order[i % order.size()]];
      ++assigned;
      ++i;
    }
  }
  while (assigned > size) {
    size_t best = n;
    for (size_t s = 0; s < n; ++s) {
      if (out[s] > 1 && (best == n || out[s] > out[best])) best = s;
    }
    --out[best];
    --assigned;
  }
  return out;
}

int choose_table_log(size_t symbols, size_t present) {
  int log = std::clamp(static_cast<int>(std::bit_width(symbols)) - 2,
                       kMinTableLog, kMaxTableLog);
  while (log < kMaxTableLog && (size_t{1} << log) < present) ++log;
  if ((size_t{1} << log) < present) {
    throw InvalidArgument("alphabet too large for the tANS table");
  }
  return log;
}

FseTable::FseTable(std::span<const uint32_t> normalized, int table_log)
    : table_log_(table_log), counts_(normalized.begin(), normalized.end()) {
  if (table_log < kMinTableLog || table_log > kMaxTableLog) {
    throw InvalidArgument("table_log out of range");
  }
  if (counts_.empty() || counts_.size() > 65536) {
    throw InvalidArgument("bad alphabet size");
  }
  const uint32_t size = 1u << table_log;
  uint64_t sum = 0;
  for (uint32_t c : counts_) sum += c;
  if (sum != size) {
    throw InvalidArgument("normalized counts must sum to the table size");
  }

  spread_.assign(size, 0);
  const uint32_t mask = size - 1;
  const uint32_t step = (size >> 1) + (size >> 3) + 3;
  uint32_t pos = 0;
  for (size_t s = 0; s < counts_.size(); ++s) {
    for (uint32_t i = 0; i < counts_[s]; ++i) {
      spread_[pos] = static_cast<uint16_t>(s);
      pos = (pos + step) & mask;
    }
  }

  start_.assign(counts_.size(), 0);
  uint32_t acc = 0;
  for (size_t s = 0; s < counts_.size(); ++s) {
    start_[s] = acc;
    acc += counts_[s];
  }
  encode_.assign(size, 0);
  decode_.assign(size, {});
  std::vector<uint32_t> next(counts_.begin(), counts_.end());
  for (uint32_t u = 0; u < size; ++u) {
    const uint16_t s = spread_[u];
    const uint32_t x = next[s]++;
    encode_[start_[s] + x - counts_[s]] = size + u;
    const int bits = table_log - (static_cast<int>(std::bit_width(x)) - 1);
    decode_[u] = {s, static_cast<uint8_t>(bits), x << bits};
  }
}

FseTable FseTable::from_histogram(std::span<const uint64_t> histogram,
                                  int table_log) {
  const auto counts = normalize_counts(histogram, table_log);
  return FseTable(counts, table_log);
}

std::vector<uint8_t> fse_encode(std::span<const uint16_t> symbols,
                                const FseTable& table) {
  const uint32_t size = 1u << table.table_log();
  struct Chunk {
    uint32_t value;
    int bits;
  };
  std::vector<Chunk> chunks;
  chunks.reserve(symbols.size());
  uint32_t state = size;
  for (size_t i = symbols.size(); i-- > 0;) {
    const uint16_t s = symbols[i];
    if (s >= table.alphabet_size() || table.counts()[s] == 0) {
      throw InvalidArgument("symbol " + std::to_string(s) +
                            " is absent from the table");
    }
    const uint32_t k = table.counts()[s];
    int nb = 0;
    while ((state >> nb) >= 2 * k) ++nb;
    chunks.push_back({state & ((1u << nb) - 1), nb});
    state = table.encode_state(s, state >> nb);
  }
  BitWriter bw;
  bw.put_bits(state - size, table.table_log());
  for (size_t i = chunks.size(); i-- > 0;) {
    bw.put_bits(chunks[i].value, chunks[i].bits);
  }
  return bw.bytes();
}

std::vector<uint16_t> fse_decode(std::span<const uint8_t> bytes,
                                 const FseTable& table, size_t count) {
  std::vector<uint16_t> out;
  if (count == 0) return out;
  out.reserve(count);
  const uint32_t size = 1u << table.table_log();
  BitReader br(bytes);
  uint32_t state = size + static_cast<uint32_t>(br.get_bits(table.table_log()));
  for (size_t i = 0; i < count; ++i) {
    const auto& e = table.decode_entry(state - size);
    out.push_back(e.symbol);
    state = e.base + static_cast<uint32_t>(br.get_bits(e.bits));
  }
  return out;
}

void encode_integers(std::span<const int32_t> values, ByteWriter& out) {
  if (values.empty()) {
    out.put_u8(0);
    return;
  }
  std::vector<uint16_t> cats(values.size());
  std::vector<uint64_t> hist(kCategoryCount, 0);
  BitWriter extra;
  for (size_t i = 0; i < values.size(); ++i) {
    const CategorySymbol c = to_category(values[i]);
    cats[i] = static_cast<uint16_t>(c.category);
    ++hist[c.category];
    extra.put_bits(c.bits, c.category);
  }
  size_t alphabet = kCategoryCount;
  while (hist[alphabet - 1] == 0) --alphabet;
  hist.resize(alphabet);
  const size_t present = static_cast<size_t>(
      std::count_if(hist.begin(), hist.end(), [](uint64_t c) { return c; }));
  const int log = choose_table_log(values.size(), present);
  const FseTable table = FseTable::from_histogram(hist, log);

  out.put_u8(static_cast<uint8_t>(log));
  out.put_varint(values.size());
  out.put_varint(alphabet);
  for (uint32_t c : table.counts()) out.put_varint(c);
  out.put_block(fse_encode(cats, table));
  out.put_block(extra.bytes());
}

std::vector<uint8_t> encode_integers(std::span<const int32_t> values) {
  ByteWriter w;
  encode_integers(values, w);
  return w.take();
}

std::vector<int32_t> decode_integers(ByteReader& in, size_t max_count) {
  const int log = in.get_u8();
  if (log == 0) return {};
  if (log < kMinTableLog || log > kMaxTableLog) {
    throw DecodeError("bad table_log " + std::to_string(log));
  }
  const uint64_t count = in.get_varint();
  if (count == 0 || count > max_count) {
    throw DecodeError("integer payload announces " + std::to_string(count) +
                      " values, limit " + std::to_string(max_count));
  }
  const uint64_t alphabet = in.get_varint();
  if (alphabet == 0 || alphabet > kCategoryCount) {
    throw DecodeError("bad category alphabet size");
  }
  std::vector<uint32_t> counts(alphabet);
  uint64_t sum = 0;
  for (auto& c : counts) {
    const uint64_t v = in.get_varint();
    if (v > (1u << log)) throw DecodeError("bad normalized count");
    c = static_cast<uint32_t>(v);
    sum += v;
  }
  if (sum != (1u << log)) throw DecodeError("normalized counts do not sum");
  const FseTable table(counts, log);
  const auto fse_bytes = in.get_block();
  const auto extra_bytes = in.get_block();
  const auto cats = fse_decode(fse_bytes, table, count);
  BitReader extra(extra_bytes);
  std::vector<int32_t> out(count);
  for (size_t i = 0; i < count; ++i) {
    const int k = cats[i];
    out[i] = from_category(k, static_cast<uint32_t>(extra.get_bits(k)));
  }
  return out;
}

std::vector<int32_t> decode_integers(std::span<const uint8_t> bytes,
                                     size_t max_count) {
  ByteReader r(bytes);
  auto out = decode_integers(r, max_count);
  if (!r.at_end()) throw DecodeError("trailing bytes after integer payload");
  return out;
}

std::vector<int32_t> dpcm_forward(std::span<const int32_t> values) {
  std::vector<int32_t> out(values.size());
  int32_t prev = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] - prev;
    prev = values[i];
  }
  return out;
}

std::vector<int32_t> dpcm_inverse(std::span<const int32_t> deltas) {
  std::vector<int32_t> out(deltas.size());
  int64_t acc = 0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    acc += deltas[i];
    if (acc > INT32_MAX || acc < INT32_MIN) {
      throw DecodeError("dpcm accumulator overflow");
    }
    out[i] = static_cast<int32_t>(acc);
  }
  return out;
}

double empirical_entropy(std::span<const uint16_t> symbols) {
  if (symbols.empty()) return 0.0;
  std::vector<uint64_t> hist(65536, 0);
  for (uint16_t s : symbols) ++hist[s];
  const double n = static_cast<double>(symbols.size());
  double h = 0.0;
  for (uint64_t c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace hivc
