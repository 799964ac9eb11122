#ifndef SCF_COMMON_HPP
#define SCF_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scf {

using Bytes = std::vector<uint8_t>;

// Base class for every recoverable failure raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or buffer (PPM header, container framing, model file).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Entropy-coded payload ended early or decoded to an impossible state.
class StreamError : public Error {
 public:
  explicit StreamError(const std::string& what) : Error(what) {}
};

// Filesystem-level failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Big-endian integer helpers shared by the container, model file and stub
// codec framing.
inline void put_u16be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u64be(Bytes& out, uint64_t v) {
  put_u32be(out, static_cast<uint32_t>(v >> 32));
  put_u32be(out, static_cast<uint32_t>(v));
}

// Bounds-checked cursor over an input buffer. Every read throws ParseError
// past the end, so malformed files turn into structured errors.
class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const Bytes& b) : ByteReader(b.data(), b.size()) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return size_ - pos_; }
  bool exhausted() const { return pos_ >= size_; }

  uint8_t u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }
  uint16_t u16be(const char* what) {
    need(2, what);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t u32be(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  uint64_t u64be(const char* what) {
    uint64_t hi = u32be(what);
    return hi << 32 | u32be(what);
  }
  const uint8_t* bytes(size_t n, const char* what) {
    need(n, what);
    const uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

 private:
  void need(size_t n, const char* what) const {
    if (size_ - pos_ < n)
      throw ParseError(std::string("truncated input while reading ") + what +
                       " at offset " + std::to_string(pos_));
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

}  // namespace scf

#endif  // SCF_COMMON_HPP
