#include "scf/range_coder.hpp"

#include <cmath>

namespace scf {

namespace {
constexpr uint64_t kTop = 1ull << 56;
constexpr uint64_t kBot = 1ull << 32;
}  // namespace

double code_length_bits(const FrequencyTable& table, size_t symbol) {
  uint32_t c = table.count(symbol);
  if (c == 0) throw Error("code_length_bits: symbol has zero count");
  return std::log2(static_cast<double>(table.total())) -
         std::log2(static_cast<double>(c));
}

void RangeEncoder::encode(uint64_t cum, uint64_t freq, uint64_t total) {
  if (freq == 0) throw Error("range encoder: zero-count symbol");
  if (total >= kBot || cum + freq > total)
    throw Error("range encoder: invalid frequency table");
  range_ /= total;
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop ||
         (range_ < kBot && ((range_ = (0 - low_) & (kBot - 1)), true))) {
    out_.push_back(static_cast<uint8_t>(low_ >> 56));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::encode_symbol(const FrequencyTable& table, size_t symbol) {
  encode(table.cumulative(symbol), table.count(symbol), table.total());
}

Bytes RangeEncoder::finish() {
  for (int i = 0; i < 8; ++i) {
    out_.push_back(static_cast<uint8_t>(low_ >> 56));
    low_ <<= 8;
  }
  return std::move(out_);
}

RangeDecoder::RangeDecoder(const uint8_t* data, size_t size)
    : data_(data), size_(size) {
  for (int i = 0; i < 8; ++i) code_ = code_ << 8 | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ >= size_) throw StreamError("range decoder: stream truncated");
  return data_[pos_++];
}

uint64_t RangeDecoder::decode_target(uint64_t total) {
  if (total == 0 || total >= kBot)
    throw StreamError("range decoder: invalid table total");
  range_ /= total;
  uint64_t target = (code_ - low_) / range_;
  if (target >= total) throw StreamError("range decoder: corrupt stream");
  return target;
}

void RangeDecoder::decode_update(uint64_t cum, uint64_t freq) {
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop ||
         (range_ < kBot && ((range_ = (0 - low_) & (kBot - 1)), true))) {
    code_ = code_ << 8 | next_byte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

size_t RangeDecoder::decode_symbol(const FrequencyTable& table) {
  uint64_t target = decode_target(table.total());
  size_t symbol = table.find(target);
  decode_update(table.cumulative(symbol), table.count(symbol));
  return symbol;
}

}  // namespace scf
