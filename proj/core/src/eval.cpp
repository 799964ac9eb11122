#include "scf/eval.hpp"

#include <algorithm>
#include <cmath>

#include "scf/parallel.hpp"
#include "scf/scf_codec.hpp"

namespace scf {

double psnr_rgb(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error("psnr_rgb: image dimensions disagree");
  if (a.empty()) throw Error("psnr_rgb: empty image");
  uint64_t sse = 0;
  for (size_t i = 0; i < a.pixels().size(); ++i) {
    int dr = int(a.pixels()[i].r) - int(b.pixels()[i].r);
    int dg = int(a.pixels()[i].g) - int(b.pixels()[i].g);
    int db = int(a.pixels()[i].b) - int(b.pixels()[i].b);
    sse += uint64_t(dr * dr + dg * dg + db * db);
  }
  if (sse == 0) return kPsnrCap;
  double mse = double(sse) / (3.0 * double(a.pixel_count()));
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double bpp(size_t payload_bytes, uint32_t width, uint32_t height) {
  if (width == 0 || height == 0) throw Error("bpp: empty image");
  return 8.0 * double(payload_bytes) /
         (double(width) * double(height));
}

double akima_interpolate(const std::vector<double>& xs,
                         const std::vector<double>& ys, double xq) {
  const size_t n = xs.size();
  if (n < 4 || ys.size() != n)
    throw Error("akima_interpolate: need at least 4 knots");
  for (size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1]))
      throw Error("akima_interpolate: knots not strictly increasing");
  if (xq < xs.front() || xq > xs.back())
    throw Error("akima_interpolate: query outside knot range");

  // Segment slopes with the standard two-slope extension on both ends;
  // d[k+2] is the slope of segment k.
  std::vector<double> d(n + 3);
  for (size_t k = 0; k + 1 < n; ++k)
    d[k + 2] = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
  d[1] = 2.0 * d[2] - d[3];
  d[0] = 2.0 * d[1] - d[2];
  d[n + 1] = 2.0 * d[n] - d[n - 1];
  d[n + 2] = 2.0 * d[n + 1] - d[n];

  // Akima knot slopes.
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) {
    double w1 = std::abs(d[i + 3] - d[i + 2]);
    double w2 = std::abs(d[i + 1] - d[i]);
    t[i] = (w1 + w2) > 0.0 ? (w1 * d[i + 1] + w2 * d[i + 2]) / (w1 + w2)
                           : 0.5 * (d[i + 1] + d[i + 2]);
  }

  size_t seg = size_t(std::upper_bound(xs.begin(), xs.end(), xq) - xs.begin());
  seg = seg == 0 ? 0 : seg - 1;
  if (seg >= n - 1) seg = n - 2;

  double h = xs[seg + 1] - xs[seg];
  double s = (xq - xs[seg]) / h;
  double s2 = s * s, s3 = s2 * s;
  return ys[seg] * (2 * s3 - 3 * s2 + 1) + h * t[seg] * (s3 - 2 * s2 + s) +
         ys[seg + 1] * (-2 * s3 + 3 * s2) + h * t[seg + 1] * (s3 - s2);
}

namespace {

struct QualityRateKnots {
  std::vector<double> quality;
  std::vector<double> log_rate;
};

QualityRateKnots curve_knots(const RdCurve& curve, const char* which) {
  QualityRateKnots k;
  for (const RdPoint& p : curve.points) {
    if (p.quality >= kPsnrCap) continue;  // lossless points are excluded
    if (!(p.rate > 0.0)) throw Error(std::string(which) + ": non-positive rate");
    k.quality.push_back(p.quality);
    k.log_rate.push_back(std::log10(p.rate));
  }
  if (k.quality.size() < 4)
    throw Error(std::string(which) +
                ": need at least 4 uncapped points for BD-rate");
  for (size_t i = 1; i < k.quality.size(); ++i)
    if (!(k.quality[i] > k.quality[i - 1]))
      throw Error(std::string(which) + ": quality not strictly increasing");
  return k;
}

}  // namespace

double bd_rate(const RdCurve& reference, const RdCurve& test) {
  QualityRateKnots ref = curve_knots(reference, "reference curve");
  QualityRateKnots tst = curve_knots(test, "test curve");

  double lo = std::max(ref.quality.front(), tst.quality.front());
  double hi = std::min(ref.quality.back(), tst.quality.back());
  if (!(hi > lo)) throw Error("bd_rate: no common quality interval");

  // Trapezoidal quadrature of the log-rate gap at 1000 uniform samples.
  constexpr int kSamples = 1000;
  double step = (hi - lo) / double(kSamples - 1);
  double integral = 0.0;
  double prev = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    double q = i + 1 == kSamples ? hi : lo + step * i;
    double diff = akima_interpolate(tst.quality, tst.log_rate, q) -
                  akima_interpolate(ref.quality, ref.log_rate, q);
    if (i > 0) integral += 0.5 * (prev + diff) * step;
    prev = diff;
  }
  double mean = integral / (hi - lo);
  return (std::pow(10.0, mean) - 1.0) * 100.0;
}

double log_domain_mean(const std::vector<double>& scores) {
  if (scores.empty()) throw Error("log_domain_mean: empty score list");
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0) || s >= 1.0)
      throw Error("log_domain_mean: score outside [0, 1)");
    sum += -std::log10(1.0 - s);
  }
  return sum / double(scores.size());
}

double log_domain_average(const std::vector<double>& scores) {
  return 1.0 - std::pow(10.0, -log_domain_mean(scores));
}

BlockStudyReport block_study(const std::vector<RgbImage>& corpus,
                             const BaseCodec& codec,
                             const std::vector<int>& quality_levels,
                             uint32_t ctu_size) {
  if (corpus.empty()) throw Error("block_study: empty corpus");
  if (quality_levels.empty()) throw Error("block_study: no quality levels");

  struct BlockRef {
    uint32_t image_index;
    uint32_t block_index;
    RgbImage block;
  };
  std::vector<BlockRef> blocks;
  for (size_t i = 0; i < corpus.size(); ++i)
    for (const CtuRect& rect : split_into_ctus(corpus[i], ctu_size))
      blocks.push_back(
          BlockRef{uint32_t(i), rect.index, crop(corpus[i], rect)});

  struct Rates {
    uint64_t scf_bits = 0;
    std::vector<uint64_t> base_bits;
  };
  std::vector<Rates> rates(blocks.size());
  parallel_for(blocks.size(), [&](size_t i) {
    rates[i].scf_bits = estimate_scf_rate(blocks[i].block);
    rates[i].base_bits.reserve(quality_levels.size());
    for (int q : quality_levels)
      rates[i].base_bits.push_back(
          uint64_t(codec.encode(blocks[i].block, q).size()) * 8);
  });

  BlockStudyReport report;
  for (size_t li = 0; li < quality_levels.size(); ++li) {
    BlockStudyLevel level;
    level.quality_level = quality_levels[li];
    for (size_t i = 0; i < blocks.size(); ++i) {
      BlockStudyRow row;
      row.image_index = blocks[i].image_index;
      row.block_index = blocks[i].block_index;
      row.quality_level = quality_levels[li];
      row.scf_bits = rates[i].scf_bits;
      row.base_bits = rates[i].base_bits[li];
      row.label = row.scf_bits < row.base_bits ? CtuLabel::Scf : CtuLabel::Base;
      report.rows.push_back(row);

      uint64_t area = blocks[i].block.pixel_count();
      level.blocks_total += 1;
      level.pixels_total += area;
      if (row.label == CtuLabel::Scf) {
        level.blocks_scf += 1;
        level.pixels_scf += area;
      }
    }
    report.levels.push_back(level);
  }
  return report;
}

}  // namespace scf
