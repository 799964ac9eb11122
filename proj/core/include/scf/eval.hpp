#ifndef SCF_EVAL_HPP
#define SCF_EVAL_HPP

#include <cstdint>
#include <vector>

#include "scf/base_codec.hpp"
#include "scf/ctu.hpp"
#include "scf/image.hpp"

namespace scf {

// Sentinel quality for identical images, so lossless results can sit on RD
// curves; capped points are excluded from BD integration.
inline constexpr double kPsnrCap = 999.0;

// 10*log10(255^2 / MSE) with the MSE pooled over all channels and pixels.
double psnr_rgb(const RgbImage& a, const RgbImage& b);

double bpp(size_t payload_bytes, uint32_t width, uint32_t height);

struct RdPoint {
  double rate = 0.0;     // bits per pixel
  double quality = 0.0;  // dB or transformed score
};

struct RdCurve {
  std::vector<RdPoint> points;  // strictly increasing in rate
};

// Classic Akima piecewise-cubic interpolation; exact at knots, linear on
// collinear data. Requires >= 4 strictly increasing knots and an in-range
// query.
double akima_interpolate(const std::vector<double>& xs,
                         const std::vector<double>& ys, double xq);

// Average log-rate difference of `test` against `reference` over the common
// quality interval, integrated with Akima interpolants of log10(rate) over
// quality; negative percentages mean the test curve saves rate. Capped
// quality points are dropped before integration.
double bd_rate(const RdCurve& reference, const RdCurve& test);

// Mean of -log10(1 - s) over scores in [0, 1).
double log_domain_mean(const std::vector<double>& scores);
// The representative score mapped back from the log-domain mean.
double log_domain_average(const std::vector<double>& scores);

struct BlockStudyRow {
  uint32_t image_index = 0;
  uint32_t block_index = 0;
  int quality_level = 0;
  uint64_t scf_bits = 0;
  uint64_t base_bits = 0;
  CtuLabel label = CtuLabel::Base;
};

struct BlockStudyLevel {
  int quality_level = 0;
  uint64_t blocks_total = 0;
  uint64_t blocks_scf = 0;
  uint64_t pixels_total = 0;
  uint64_t pixels_scf = 0;

  double scf_block_fraction() const {
    return blocks_total ? double(blocks_scf) / double(blocks_total) : 0.0;
  }
  double scf_pixel_fraction() const {
    return pixels_total ? double(pixels_scf) / double(pixels_total) : 0.0;
  }
};

struct BlockStudyReport {
  std::vector<BlockStudyRow> rows;      // one per block per level
  std::vector<BlockStudyLevel> levels;  // aggregated per level
};

// Tiles the corpus into CTUs and oracle-labels every block at every quality
// level by paired encoding.
BlockStudyReport block_study(const std::vector<RgbImage>& corpus,
                             const BaseCodec& codec,
                             const std::vector<int>& quality_levels,
                             uint32_t ctu_size = kDefaultCtuSize);

}  // namespace scf

#endif  // SCF_EVAL_HPP
