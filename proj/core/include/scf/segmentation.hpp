#ifndef SCF_SEGMENTATION_HPP
#define SCF_SEGMENTATION_HPP

#include <vector>

#include "scf/base_codec.hpp"
#include "scf/container.hpp"
#include "scf/features.hpp"
#include "scf/knn.hpp"

namespace scf {

// Ground-truth label by actually encoding the block both ways: SCF wins only
// on strictly fewer bits, ties stay in the base layer.
CtuLabel oracle_label(const RgbImage& block, const BaseCodec& codec,
                      int quality_level);

CtuLabeler oracle_labeler(const BaseCodec& codec, int quality_level);
CtuLabeler knn_labeler(KnnModel model);

// Dual-rate measurement of one block: the level-independent SCF rate plus
// the base codec rate per quality level, alongside the block features.
struct BlockRates {
  BlockFeatures features;
  uint64_t scf_bits = 0;
  std::vector<uint64_t> base_bits;  // parallel to the quality_levels argument

  bool scf_wins(size_t level_index) const {
    return scf_bits < base_bits[level_index];
  }
};

std::vector<BlockRates> measure_blocks(const std::vector<RgbImage>& blocks,
                                       const BaseCodec& codec,
                                       const std::vector<int>& quality_levels);

std::vector<TrainingSample> samples_for_level(
    const std::vector<BlockRates>& rates, const std::vector<int>& quality_levels,
    size_t level_index);

// Tiles every corpus image into CTU blocks (raster order per image).
std::vector<RgbImage> tile_corpus(const std::vector<RgbImage>& images,
                                  uint32_t ctu_size);

}  // namespace scf

#endif  // SCF_SEGMENTATION_HPP
