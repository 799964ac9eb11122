#include "scf/features.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "scf/common.hpp"

namespace scf {

namespace {

// A/B neighbors with the boundary rule restricted to the simplified
// template: an unavailable member takes the first available one in the order
// A,B; with neither available both become (128,128,128).
void simplified_neighbors(const RgbImage& block, uint32_t x, uint32_t y,
                          uint32_t& a, uint32_t& b) {
  bool has_a = x > 0;
  bool has_b = y > 0;
  if (has_a) a = pack_rgb(block.at(x - 1, y));
  if (has_b) b = pack_rgb(block.at(x, y - 1));
  if (!has_a && !has_b) {
    a = b = pack_rgb(Rgb{128, 128, 128});
  } else if (!has_a) {
    a = b;
  } else if (!has_b) {
    b = a;
  }
}

}  // namespace

double entropy_bits(const std::vector<uint64_t>& counts) {
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (uint64_t c : counts) {
    if (c == 0) continue;
    double p = double(c) / double(total);
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

PatternStats simplified_pattern_stats(const RgbImage& block) {
  if (block.empty()) throw Error("simplified_pattern_stats: empty block");

  struct ContextCounts {
    std::unordered_map<uint32_t, uint32_t> colors;  // X -> count
    uint64_t total = 0;
  };
  std::unordered_map<uint64_t, ContextCounts> contexts;  // (A,B) -> counts

  PatternStats stats;
  for (uint32_t y = 0; y < block.height(); ++y)
    for (uint32_t x = 0; x < block.width(); ++x) {
      uint32_t a, b;
      simplified_neighbors(block, x, y, a, b);
      uint64_t ctx = uint64_t(a) << 24 | b;
      uint32_t color = pack_rgb(block.at(x, y));
      ContextCounts& cc = contexts[ctx];
      uint32_t& n = cc.colors[color];
      if (n == 0) {
        ++stats.distinct_patterns;
        stats.first_occurrence_pixels.push_back(y * block.width() + x);
      }
      ++n;
      ++cc.total;
    }

  // H(X | (A,B)) = sum_ab p(ab) H(X | ab) over the joint counts.
  double h = 0.0;
  const double n_pixels = double(block.pixel_count());
  for (const auto& [ctx, cc] : contexts) {
    if (cc.colors.size() < 2) continue;  // deterministic context, H = 0
    double hc = 0.0;
    for (const auto& [color, count] : cc.colors) {
      double p = double(count) / double(cc.total);
      hc -= p * std::log2(p);
    }
    h += double(cc.total) / n_pixels * hc;
  }
  stats.conditional_entropy = h < 0.0 ? 0.0 : h;
  return stats;
}

BlockFeatures extract_features(const RgbImage& block) {
  if (block.empty()) throw Error("extract_features: empty block");
  PatternStats stats = simplified_pattern_stats(block);

  std::unordered_set<uint32_t> colors;
  for (Rgb p : block.pixels()) colors.insert(pack_rgb(p));

  // Color entropy restricted to first-occurrence pixels, which stand in for
  // the pixels a real run would code in Stage 2 or 3.
  std::unordered_map<uint32_t, uint64_t> stage23_colors;
  for (uint32_t idx : stats.first_occurrence_pixels)
    ++stage23_colors[pack_rgb(block.pixels()[idx])];
  std::vector<uint64_t> counts;
  counts.reserve(stage23_colors.size());
  for (const auto& [color, count] : stage23_colors) counts.push_back(count);

  const double area = double(block.pixel_count());
  BlockFeatures f;
  f.colors_norm = double(colors.size()) / area;
  f.patterns_norm = double(stats.distinct_patterns) / area;
  f.stage23_color_entropy = entropy_bits(counts);
  f.conditional_entropy = stats.conditional_entropy;
  return f;
}

}  // namespace scf
