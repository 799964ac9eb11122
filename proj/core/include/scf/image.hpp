#ifndef SCF_IMAGE_HPP
#define SCF_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scf/common.hpp"

namespace scf {

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Channel order stays RGB when packing; gives a total order on colors used
// for deterministic tie-breaks.
inline uint32_t pack_rgb(Rgb c) {
  return static_cast<uint32_t>(c.r) << 16 | static_cast<uint32_t>(c.g) << 8 |
         static_cast<uint32_t>(c.b);
}

inline Rgb unpack_rgb(uint32_t v) {
  return Rgb{static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 8),
             static_cast<uint8_t>(v)};
}

// 8-bit-per-channel RGB raster, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(uint32_t width, uint32_t height, Rgb fill = Rgb{})
      : width_(width), height_(height),
        pixels_(static_cast<size_t>(width) * height, fill) {}

  uint32_t width() const { return width_; }
  uint32_t height() const { return height_; }
  size_t pixel_count() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  bool in_bounds(int64_t x, int64_t y) const {
    return x >= 0 && y >= 0 && x < static_cast<int64_t>(width_) &&
           y < static_cast<int64_t>(height_);
  }

  Rgb at(uint32_t x, uint32_t y) const {
    return pixels_[static_cast<size_t>(y) * width_ + x];
  }
  Rgb& at(uint32_t x, uint32_t y) {
    return pixels_[static_cast<size_t>(y) * width_ + x];
  }

  const std::vector<Rgb>& pixels() const { return pixels_; }
  std::vector<Rgb>& pixels() { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  uint32_t width_ = 0;
  uint32_t height_ = 0;
  std::vector<Rgb> pixels_;
};

// Binary PPM (P6, maxval 255) codec. load_ppm accepts the standard header
// grammar including '#' comments; save_ppm always emits the canonical form
// "P6\n<w> <h>\n255\n" so save -> load -> save is the identity.
RgbImage load_ppm(const Bytes& bytes);
Bytes save_ppm(const RgbImage& image);

RgbImage load_ppm_file(const std::string& path);
void save_ppm_file(const std::string& path, const RgbImage& image);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& bytes);

}  // namespace scf

#endif  // SCF_IMAGE_HPP
