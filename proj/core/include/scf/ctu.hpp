#ifndef SCF_CTU_HPP
#define SCF_CTU_HPP

#include <cstdint>
#include <vector>

#include "scf/image.hpp"

namespace scf {

inline constexpr uint32_t kDefaultCtuSize = 128;

// Block tiling of an image. Boundary blocks at the right/bottom edges are
// clipped (cut-off blocks) and remain first-class blocks.
struct CtuGrid {
  uint32_t ctu_size = kDefaultCtuSize;
  uint32_t cols = 0;
  uint32_t rows = 0;

  CtuGrid() = default;
  CtuGrid(uint32_t width, uint32_t height, uint32_t size)
      : ctu_size(size),
        cols((width + size - 1) / size),
        rows((height + size - 1) / size) {}

  uint32_t count() const { return cols * rows; }
  friend bool operator==(const CtuGrid&, const CtuGrid&) = default;
};

struct CtuRect {
  uint32_t index = 0;
  uint32_t x = 0;
  uint32_t y = 0;
  uint32_t width = 0;
  uint32_t height = 0;

  uint64_t area() const { return static_cast<uint64_t>(width) * height; }
};

// Raster-order (left-to-right, top-to-bottom) rectangles tiling the image
// exactly, with clipped boundary blocks.
std::vector<CtuRect> split_into_ctus(uint32_t width, uint32_t height,
                                     uint32_t ctu_size);

inline std::vector<CtuRect> split_into_ctus(const RgbImage& image,
                                            uint32_t ctu_size) {
  return split_into_ctus(image.width(), image.height(), ctu_size);
}

RgbImage crop(const RgbImage& image, const CtuRect& rect);

enum class CtuLabel : uint8_t { Base = 0, Scf = 1 };

// One label per CTU in raster order.
struct SegmentationMask {
  CtuGrid grid;
  std::vector<CtuLabel> labels;

  SegmentationMask() = default;
  SegmentationMask(CtuGrid g, CtuLabel fill)
      : grid(g), labels(g.count(), fill) {}

  CtuLabel at(uint32_t col, uint32_t row) const {
    return labels[static_cast<size_t>(row) * grid.cols + col];
  }
  // Label of the CTU containing pixel (x, y).
  CtuLabel at_pixel(uint32_t x, uint32_t y) const {
    return at(x / grid.ctu_size, y / grid.ctu_size);
  }

  bool all_scf() const;
  bool all_base() const;
  uint32_t count_scf() const;

  friend bool operator==(const SegmentationMask&, const SegmentationMask&) =
      default;
};

// Fraction of image pixels (not CTUs) inside SCF-labeled blocks.
double scf_pixel_fraction(const SegmentationMask& mask, uint32_t width,
                          uint32_t height);

enum class LayerRole : uint8_t { ScfLayer, BaseLayer };

struct LayerImage {
  RgbImage image;
  SegmentationMask mask;
  LayerRole role = LayerRole::BaseLayer;
};

// Base-layer input: SCF CTUs are set to black, BASE CTUs keep the source.
LayerImage blacken(const RgbImage& image, const SegmentationMask& mask);

// Per-pixel layer selection: SCF CTUs from scf_pixels, BASE CTUs from
// base_recon. Throws ParseError on dimension mismatch.
RgbImage compose_layers(const RgbImage& base_recon, const RgbImage& scf_pixels,
                        const SegmentationMask& mask);

}  // namespace scf

#endif  // SCF_CTU_HPP
