#ifndef SCF_KNN_HPP
#define SCF_KNN_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scf/ctu.hpp"
#include "scf/features.hpp"

namespace scf {

struct TrainingSample {
  BlockFeatures features;
  CtuLabel label = CtuLabel::Base;
  int quality_level = 0;
};

// k-nearest-neighbor classifier over z-scored features, one model per
// quality level.
struct KnnModel {
  int k = 5;
  int quality_level = 0;
  std::array<double, 4> feature_mean{};
  std::array<double, 4> feature_scale{};  // stddev, degenerate dims get 1
  std::vector<TrainingSample> samples;
};

KnnModel knn_train(const std::vector<TrainingSample>& samples, int k);

// Majority vote among the k nearest by Euclidean distance in standardized
// space; neighbor ties broken by (distance, sample index), vote ties go to
// BASE. Throws on non-finite query features.
CtuLabel knn_classify(const KnnModel& model, const BlockFeatures& query);

// Deterministic 10-fold cross-validation (fold = sample index mod folds);
// returns mean accuracy over folds.
double cross_validate(const std::vector<TrainingSample>& samples, int k,
                      int folds = 10);

// Versioned, length-prefixed binary model file.
Bytes serialize_model(const KnnModel& model);
KnnModel deserialize_model(const Bytes& bytes);
void save_model_file(const std::string& path, const KnnModel& model);
KnnModel load_model_file(const std::string& path);

}  // namespace scf

#endif  // SCF_KNN_HPP
