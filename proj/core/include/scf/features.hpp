#ifndef SCF_FEATURES_HPP
#define SCF_FEATURES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "scf/image.hpp"

namespace scf {

// The four block features driving the layer classifier.
struct BlockFeatures {
  double colors_norm = 0.0;           // distinct colors / pixel count
  double patterns_norm = 0.0;         // distinct simplified patterns / pixels
  double stage23_color_entropy = 0.0; // bits, over first-occurrence pixels
  double conditional_entropy = 0.0;   // bits, H(X | {A,B})

  std::array<double, 4> as_array() const {
    return {colors_norm, patterns_norm, stage23_color_entropy,
            conditional_entropy};
  }
};

// Raster-order statistics over the simplified pattern P' = {A, B, X}, with
// the same boundary substitution rule as the full coder template.
struct PatternStats {
  uint64_t distinct_patterns = 0;  // distinct (A,B,X) triples
  // Raster indices of pixels whose (A,B,X) triple occurs for the first time;
  // these are the pixels estimated to be coded in Stage 2 or 3.
  std::vector<uint32_t> first_occurrence_pixels;
  double conditional_entropy = 0.0;  // H(X | (A,B)) from joint counts
};

PatternStats simplified_pattern_stats(const RgbImage& block);

BlockFeatures extract_features(const RgbImage& block);

// Shannon entropy in bits of a count vector.
double entropy_bits(const std::vector<uint64_t>& counts);

}  // namespace scf

#endif  // SCF_FEATURES_HPP
