#include "scf/base_codec.hpp"

#include <algorithm>
#include <cmath>

#include "scf/range_coder.hpp"

namespace scf {

namespace {

constexpr size_t kMaxDecodePixels = 1u << 26;

int round_div(int num, int den) { return (2 * num + den) / (2 * den); }

// Median-adaptive prediction in the quantization-index domain, with the
// left/above/above-left neighbors and the usual boundary fallbacks.
int predict_index(const std::vector<int>& plane, uint32_t width, uint32_t x,
                  uint32_t y, int default_index) {
  bool has_a = x > 0;
  bool has_b = y > 0;
  int a = has_a ? plane[y * width + x - 1] : 0;
  int b = has_b ? plane[(y - 1) * width + x] : 0;
  if (!has_a && !has_b) return default_index;
  if (!has_a) return b;
  if (!has_b) return a;
  int c = plane[(y - 1) * width + x - 1];
  int mx = std::max(a, b);
  int mn = std::min(a, b);
  if (c >= mx) return mn;
  if (c <= mn) return mx;
  return a + b - c;
}

}  // namespace

int StubLossyCodec::quant_step(int quality_level) {
  double step = std::exp2((quality_level - 4) / 6.0);
  long long rounded = std::llround(step);
  return int(std::clamp<long long>(rounded, 1, 1024));
}

Bytes StubLossyCodec::encode(const RgbImage& image, int quality_level) const {
  if (image.empty()) throw Error("stub codec: empty image");
  if (quality_level < 0 || quality_level > 255)
    throw Error("stub codec: quality level out of range");

  const int q = quant_step(quality_level);
  const int max_index = round_div(255, q);
  const size_t bins = size_t(2 * max_index + 1);
  const int default_index = round_div(128, q);
  const uint32_t w = image.width(), h = image.height();

  Bytes out;
  out.push_back(uint8_t(quality_level));
  put_u32be(out, w);
  put_u32be(out, h);

  std::array<FrequencyTable, 3> hist{FrequencyTable(bins, 1),
                                     FrequencyTable(bins, 1),
                                     FrequencyTable(bins, 1)};
  std::array<std::vector<int>, 3> planes;
  for (auto& p : planes) p.resize(size_t(w) * h);

  RangeEncoder enc;
  for (uint32_t y = 0; y < h; ++y)
    for (uint32_t x = 0; x < w; ++x) {
      Rgb px = image.at(x, y);
      const int v[3] = {px.r, px.g, px.b};
      for (int ch = 0; ch < 3; ++ch) {
        int idx = round_div(v[ch], q);
        int pred = std::clamp(
            predict_index(planes[ch], w, x, y, default_index), 0, max_index);
        size_t bin = size_t(idx - pred + max_index);
        enc.encode_symbol(hist[ch], bin);
        hist[ch].add_capped(bin, 1);
        planes[ch][size_t(y) * w + x] = idx;
      }
    }
  Bytes payload = enc.finish();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

RgbImage StubLossyCodec::decode(const Bytes& payload) const {
  ByteReader r(payload);
  int quality_level = r.u8("stub quality level");
  uint32_t w = r.u32be("stub width");
  uint32_t h = r.u32be("stub height");
  if (w == 0 || h == 0) throw ParseError("stub codec: zero dimension");
  if (uint64_t(w) * h > kMaxDecodePixels)
    throw ParseError("stub codec: image too large");

  const int q = quant_step(quality_level);
  const int max_index = round_div(255, q);
  const size_t bins = size_t(2 * max_index + 1);
  const int default_index = round_div(128, q);

  std::array<FrequencyTable, 3> hist{FrequencyTable(bins, 1),
                                     FrequencyTable(bins, 1),
                                     FrequencyTable(bins, 1)};
  std::array<std::vector<int>, 3> planes;
  for (auto& p : planes) p.resize(size_t(w) * h);

  RangeDecoder dec(payload.data() + r.offset(), payload.size() - r.offset());
  RgbImage img(w, h);
  for (uint32_t y = 0; y < h; ++y)
    for (uint32_t x = 0; x < w; ++x) {
      uint8_t v[3];
      for (int ch = 0; ch < 3; ++ch) {
        size_t bin = dec.decode_symbol(hist[ch]);
        hist[ch].add_capped(bin, 1);
        int pred = std::clamp(
            predict_index(planes[ch], w, x, y, default_index), 0, max_index);
        int idx = std::clamp(pred + int(bin) - max_index, 0, max_index);
        planes[ch][size_t(y) * w + x] = idx;
        v[ch] = uint8_t(std::clamp(idx * q, 0, 255));
      }
      img.at(x, y) = Rgb{v[0], v[1], v[2]};
    }
  return img;
}

const BaseCodec& base_codec_by_id(uint8_t id) {
  static const StubLossyCodec stub;
  switch (id) {
    case StubLossyCodec::kId:
      return stub;
    default:
      throw ParseError("unknown base codec id " + std::to_string(id));
  }
}

}  // namespace scf
