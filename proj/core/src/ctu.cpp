#include "scf/ctu.hpp"

#include <algorithm>

namespace scf {

std::vector<CtuRect> split_into_ctus(uint32_t width, uint32_t height,
                                     uint32_t ctu_size) {
  std::vector<CtuRect> rects;
  if (width == 0 || height == 0 || ctu_size == 0) return rects;
  CtuGrid grid(width, height, ctu_size);
  rects.reserve(grid.count());
  uint32_t index = 0;
  for (uint32_t row = 0; row < grid.rows; ++row) {
    for (uint32_t col = 0; col < grid.cols; ++col) {
      CtuRect r;
      r.index = index++;
      r.x = col * ctu_size;
      r.y = row * ctu_size;
      r.width = std::min(ctu_size, width - r.x);
      r.height = std::min(ctu_size, height - r.y);
      rects.push_back(r);
    }
  }
  return rects;
}

RgbImage crop(const RgbImage& image, const CtuRect& rect) {
  RgbImage out(rect.width, rect.height);
  for (uint32_t y = 0; y < rect.height; ++y)
    for (uint32_t x = 0; x < rect.width; ++x)
      out.at(x, y) = image.at(rect.x + x, rect.y + y);
  return out;
}

bool SegmentationMask::all_scf() const {
  return std::all_of(labels.begin(), labels.end(),
                     [](CtuLabel l) { return l == CtuLabel::Scf; });
}

bool SegmentationMask::all_base() const {
  return std::all_of(labels.begin(), labels.end(),
                     [](CtuLabel l) { return l == CtuLabel::Base; });
}

uint32_t SegmentationMask::count_scf() const {
  return static_cast<uint32_t>(
      std::count(labels.begin(), labels.end(), CtuLabel::Scf));
}

double scf_pixel_fraction(const SegmentationMask& mask, uint32_t width,
                          uint32_t height) {
  if (width == 0 || height == 0) return 0.0;
  uint64_t scf_pixels = 0;
  for (const CtuRect& r : split_into_ctus(width, height, mask.grid.ctu_size))
    if (mask.labels[r.index] == CtuLabel::Scf) scf_pixels += r.area();
  return static_cast<double>(scf_pixels) /
         (static_cast<double>(width) * height);
}

LayerImage blacken(const RgbImage& image, const SegmentationMask& mask) {
  LayerImage out{image, mask, LayerRole::BaseLayer};
  for (uint32_t y = 0; y < image.height(); ++y)
    for (uint32_t x = 0; x < image.width(); ++x)
      if (mask.at_pixel(x, y) == CtuLabel::Scf) out.image.at(x, y) = Rgb{0, 0, 0};
  return out;
}

RgbImage compose_layers(const RgbImage& base_recon, const RgbImage& scf_pixels,
                        const SegmentationMask& mask) {
  if (base_recon.width() != scf_pixels.width() ||
      base_recon.height() != scf_pixels.height())
    throw ParseError("compose_layers: layer dimensions disagree");
  RgbImage out(base_recon.width(), base_recon.height());
  for (uint32_t y = 0; y < out.height(); ++y)
    for (uint32_t x = 0; x < out.width(); ++x)
      out.at(x, y) = mask.at_pixel(x, y) == CtuLabel::Scf ? scf_pixels.at(x, y)
                                                          : base_recon.at(x, y);
  return out;
}

}  // namespace scf
