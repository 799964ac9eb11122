#include "scf/knn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace scf {

namespace {

constexpr char kModelMagic[4] = {'S', 'C', 'F', 'K'};
constexpr uint8_t kModelVersion = 1;

std::array<double, 4> standardize(const KnnModel& model,
                                  const BlockFeatures& f) {
  std::array<double, 4> raw = f.as_array();
  std::array<double, 4> z;
  for (size_t i = 0; i < 4; ++i)
    z[i] = (raw[i] - model.feature_mean[i]) / model.feature_scale[i];
  return z;
}

void put_f64be(Bytes& out, double v) {
  put_u64be(out, std::bit_cast<uint64_t>(v));
}

double get_f64be(ByteReader& r, const char* what) {
  return std::bit_cast<double>(r.u64be(what));
}

}  // namespace

KnnModel knn_train(const std::vector<TrainingSample>& samples, int k) {
  if (samples.empty()) throw Error("knn_train: empty sample set");
  if (k < 1) throw Error("knn_train: k must be >= 1");

  KnnModel model;
  model.k = k;
  model.quality_level = samples.front().quality_level;
  model.samples = samples;

  const double n = double(samples.size());
  for (size_t dim = 0; dim < 4; ++dim) {
    double mean = 0.0;
    for (const TrainingSample& s : samples) mean += s.features.as_array()[dim];
    mean /= n;
    double var = 0.0;
    for (const TrainingSample& s : samples) {
      double d = s.features.as_array()[dim] - mean;
      var += d * d;
    }
    double sd = std::sqrt(var / n);
    model.feature_mean[dim] = mean;
    model.feature_scale[dim] = sd > 0.0 ? sd : 1.0;
  }
  return model;
}

CtuLabel knn_classify(const KnnModel& model, const BlockFeatures& query) {
  if (model.samples.empty()) throw Error("knn_classify: untrained model");
  for (double v : query.as_array())
    if (!std::isfinite(v)) throw Error("knn_classify: non-finite feature");

  std::array<double, 4> q = standardize(model, query);
  std::vector<std::pair<double, size_t>> dist;
  dist.reserve(model.samples.size());
  for (size_t i = 0; i < model.samples.size(); ++i) {
    std::array<double, 4> s = standardize(model, model.samples[i].features);
    double d2 = 0.0;
    for (size_t dim = 0; dim < 4; ++dim) {
      double d = s[dim] - q[dim];
      d2 += d * d;
    }
    dist.emplace_back(d2, i);
  }
  size_t k = std::min<size_t>(size_t(model.k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  size_t scf_votes = 0;
  for (size_t i = 0; i < k; ++i)
    if (model.samples[dist[i].second].label == CtuLabel::Scf) ++scf_votes;
  // Vote ties keep the block in the base layer.
  return 2 * scf_votes > k ? CtuLabel::Scf : CtuLabel::Base;
}

double cross_validate(const std::vector<TrainingSample>& samples, int k,
                      int folds) {
  if (folds < 2) throw Error("cross_validate: need at least 2 folds");
  if (samples.size() < size_t(folds))
    throw Error("cross_validate: fewer samples than folds");

  double accuracy_sum = 0.0;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<TrainingSample> train;
    std::vector<const TrainingSample*> validate;
    for (size_t i = 0; i < samples.size(); ++i) {
      if (int(i % size_t(folds)) == fold)
        validate.push_back(&samples[i]);
      else
        train.push_back(samples[i]);
    }
    KnnModel model = knn_train(train, k);
    size_t correct = 0;
    for (const TrainingSample* s : validate)
      if (knn_classify(model, s->features) == s->label) ++correct;
    accuracy_sum += double(correct) / double(validate.size());
  }
  return accuracy_sum / double(folds);
}

Bytes serialize_model(const KnnModel& model) {
  Bytes out;
  out.insert(out.end(), kModelMagic, kModelMagic + 4);
  out.push_back(kModelVersion);
  out.push_back(uint8_t(model.quality_level));
  put_u16be(out, uint16_t(model.k));
  for (double v : model.feature_mean) put_f64be(out, v);
  for (double v : model.feature_scale) put_f64be(out, v);
  put_u32be(out, uint32_t(model.samples.size()));
  for (const TrainingSample& s : model.samples) {
    for (double v : s.features.as_array()) put_f64be(out, v);
    out.push_back(uint8_t(s.label));
  }
  return out;
}

KnnModel deserialize_model(const Bytes& bytes) {
  ByteReader r(bytes);
  const uint8_t* magic = r.bytes(4, "model magic");
  if (!std::equal(magic, magic + 4, kModelMagic))
    throw ParseError("not a classifier model file (bad magic)");
  uint8_t version = r.u8("model version");
  if (version != kModelVersion)
    throw ParseError("unsupported model version " + std::to_string(version));

  KnnModel model;
  model.quality_level = r.u8("quality level");
  model.k = r.u16be("k");
  if (model.k < 1) throw ParseError("model k must be >= 1");
  for (double& v : model.feature_mean) v = get_f64be(r, "feature mean");
  for (double& v : model.feature_scale) {
    v = get_f64be(r, "feature scale");
    if (!(v > 0.0)) throw ParseError("non-positive feature scale");
  }
  uint32_t count = r.u32be("sample count");
  if (count == 0) throw ParseError("model has no samples");
  model.samples.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    TrainingSample s;
    s.quality_level = model.quality_level;
    std::array<double, 4> f;
    for (double& v : f) v = get_f64be(r, "sample feature");
    s.features.colors_norm = f[0];
    s.features.patterns_norm = f[1];
    s.features.stage23_color_entropy = f[2];
    s.features.conditional_entropy = f[3];
    uint8_t label = r.u8("sample label");
    if (label > 1) throw ParseError("bad sample label");
    s.label = CtuLabel(label);
    model.samples.push_back(s);
  }
  return model;
}

void save_model_file(const std::string& path, const KnnModel& model) {
  write_file(path, serialize_model(model));
}

KnnModel load_model_file(const std::string& path) {
  try {
    return deserialize_model(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace scf
