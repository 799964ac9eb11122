#ifndef SCF_RANGE_CODER_HPP
#define SCF_RANGE_CODER_HPP

#include <cstdint>
#include <vector>

#include "scf/common.hpp"

namespace scf {

// Adaptive tables halve all counts (rounding up) once the total exceeds this,
// so counts keep adapting and totals stay far below the coder's 2^32
// renormalization bound. The cap is part of the bitstream contract.
inline constexpr uint64_t kFrequencyCap = 1ull << 16;

// Dense per-symbol counts with a running total. Cumulative lookups are
// linear scans; tables used on hot paths stay small (a few hundred symbols).
class FrequencyTable {
 public:
  FrequencyTable() = default;
  FrequencyTable(size_t symbols, uint32_t initial_count)
      : counts_(symbols, initial_count),
        total_(static_cast<uint64_t>(symbols) * initial_count) {}

  size_t size() const { return counts_.size(); }
  uint64_t total() const { return total_; }
  uint32_t count(size_t symbol) const { return counts_[symbol]; }

  void push_back(uint32_t count) {
    counts_.push_back(count);
    total_ += count;
  }

  void add(size_t symbol, uint32_t delta) {
    counts_[symbol] += delta;
    total_ += delta;
  }

  // Adaptive update: bump the symbol, then halve everything (rounding up)
  // while the total exceeds the cap. Tables with more symbols than the cap
  // stop at the all-ones fixed point (total == size).
  void add_capped(size_t symbol, uint32_t delta, uint64_t cap = kFrequencyCap) {
    add(symbol, delta);
    while (total_ > cap && total_ > counts_.size()) halve();
  }

  // Sum of counts of symbols strictly before `symbol`.
  uint64_t cumulative(size_t symbol) const {
    uint64_t cum = 0;
    for (size_t i = 0; i < symbol; ++i) cum += counts_[i];
    return cum;
  }

  // Largest symbol whose cumulative is <= target; requires target < total.
  size_t find(uint64_t target) const {
    uint64_t cum = 0;
    for (size_t i = 0; i < counts_.size(); ++i) {
      cum += counts_[i];
      if (target < cum) return i;
    }
    throw StreamError("frequency table lookup out of range");
  }

  void clear() {
    counts_.clear();
    total_ = 0;
  }

  const std::vector<uint32_t>& counts() const { return counts_; }

 private:
  void halve() {
    total_ = 0;
    for (uint32_t& c : counts_) {
      c = (c + 1) / 2;
      total_ += c;
    }
  }

  std::vector<uint32_t> counts_;
  uint64_t total_ = 0;
};

// Exact self-information of coding `symbol` with `table`, in bits.
double code_length_bits(const FrequencyTable& table, size_t symbol);

// Carry-less 64-bit range coder with byte-wise renormalization. When the top
// byte of low and low+range agree it is shifted out; when range drops below
// 2^32 while still straddling a byte boundary, range is truncated to align.
// Totals must stay below 2^32 (guaranteed by the frequency cap and by the
// pixel-count bound on model totals).
class RangeEncoder {
 public:
  void encode(uint64_t cum, uint64_t freq, uint64_t total);
  void encode_symbol(const FrequencyTable& table, size_t symbol);
  // Emits the final 8 bytes of state; the encoder is spent afterwards.
  Bytes finish();

  size_t bytes_written() const { return out_.size(); }

 private:
  uint64_t low_ = 0;
  uint64_t range_ = ~0ull;
  Bytes out_;
};

class RangeDecoder {
 public:
  RangeDecoder(const uint8_t* data, size_t size);
  explicit RangeDecoder(const Bytes& payload)
      : RangeDecoder(payload.data(), payload.size()) {}

  // Two-phase decode: decode_target(total) yields a value in [0, total) that
  // the caller maps to a symbol, then decode_update commits (cum, freq) of
  // that symbol. The pair must bracket the target.
  uint64_t decode_target(uint64_t total);
  void decode_update(uint64_t cum, uint64_t freq);

  size_t decode_symbol(const FrequencyTable& table);

  size_t bytes_consumed() const { return pos_; }

 private:
  uint8_t next_byte();

  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  uint64_t low_ = 0;
  uint64_t range_ = ~0ull;
  uint64_t code_ = 0;
};

}  // namespace scf

#endif  // SCF_RANGE_CODER_HPP
