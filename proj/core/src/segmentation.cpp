#include "scf/segmentation.hpp"

#include "scf/parallel.hpp"
#include "scf/scf_codec.hpp"

namespace scf {

CtuLabel oracle_label(const RgbImage& block, const BaseCodec& codec,
                      int quality_level) {
  uint64_t scf_bits = estimate_scf_rate(block);
  uint64_t base_bits = uint64_t(codec.encode(block, quality_level).size()) * 8;
  return scf_bits < base_bits ? CtuLabel::Scf : CtuLabel::Base;
}

CtuLabeler oracle_labeler(const BaseCodec& codec, int quality_level) {
  return [&codec, quality_level](const RgbImage& block) {
    return oracle_label(block, codec, quality_level);
  };
}

CtuLabeler knn_labeler(KnnModel model) {
  return [model = std::move(model)](const RgbImage& block) {
    return knn_classify(model, extract_features(block));
  };
}

std::vector<BlockRates> measure_blocks(const std::vector<RgbImage>& blocks,
                                       const BaseCodec& codec,
                                       const std::vector<int>& quality_levels) {
  std::vector<BlockRates> rates(blocks.size());
  parallel_for(blocks.size(), [&](size_t i) {
    BlockRates& r = rates[i];
    r.features = extract_features(blocks[i]);
    r.scf_bits = estimate_scf_rate(blocks[i]);
    r.base_bits.reserve(quality_levels.size());
    for (int q : quality_levels)
      r.base_bits.push_back(uint64_t(codec.encode(blocks[i], q).size()) * 8);
  });
  return rates;
}

std::vector<TrainingSample> samples_for_level(
    const std::vector<BlockRates>& rates,
    const std::vector<int>& quality_levels, size_t level_index) {
  std::vector<TrainingSample> samples;
  samples.reserve(rates.size());
  for (const BlockRates& r : rates) {
    TrainingSample s;
    s.features = r.features;
    s.label = r.scf_wins(level_index) ? CtuLabel::Scf : CtuLabel::Base;
    s.quality_level = quality_levels[level_index];
    samples.push_back(s);
  }
  return samples;
}

std::vector<RgbImage> tile_corpus(const std::vector<RgbImage>& images,
                                  uint32_t ctu_size) {
  std::vector<RgbImage> blocks;
  for (const RgbImage& img : images)
    for (const CtuRect& rect : split_into_ctus(img, ctu_size))
      blocks.push_back(crop(img, rect));
  return blocks;
}

}  // namespace scf
