// scfh: hybrid screen-content coding tool.
//
// Subcommands: encode, decode, train, features, bench. Machine-parseable
// stats go to stdout, diagnostics to stderr. Exit codes: 0 success, 2 usage
// error, 3 data error.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scf/container.hpp"
#include "scf/eval.hpp"
#include "scf/knn.hpp"
#include "scf/parallel.hpp"
#include "scf/scf_codec.hpp"
#include "scf/segmentation.hpp"

namespace fs = std::filesystem;
using namespace scf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* mode_name(ModeFlag m) {
  switch (m) {
    case ModeFlag::AllScf: return "all-scf";
    case ModeFlag::AllBase: return "all-base";
    case ModeFlag::Mixed: return "mixed";
  }
  return "?";
}

std::vector<std::string> list_ppm_files(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw UsageError("corpus directory not found: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .ppm files in " + dir);
  return files;
}

std::vector<RgbImage> load_corpus(const std::vector<std::string>& files) {
  std::vector<RgbImage> images(files.size());
  parallel_for(files.size(), [&](size_t i) {
    images[i] = load_ppm_file(files[i]);
  });
  return images;
}

uint64_t splitmix(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
  std::string input, output, model_path;
  int quality = 22;
  bool oracle = false;
  uint32_t ctu_size = kDefaultCtuSize;
  int codec_id = 0;
};

int cmd_encode(const EncodeArgs& args) {
  if (!args.oracle && args.model_path.empty())
    throw UsageError("model required: pass --model FILE or --oracle");

  const BaseCodec& codec = base_codec_by_id(uint8_t(args.codec_id));
  CtuLabeler labeler;
  if (args.oracle) {
    labeler = oracle_labeler(codec, args.quality);
  } else {
    KnnModel model = load_model_file(args.model_path);
    if (model.quality_level != args.quality)
      throw UsageError("model " + args.model_path + " was trained for level " +
                       std::to_string(model.quality_level) + ", not " +
                       std::to_string(args.quality));
    labeler = knn_labeler(std::move(model));
  }

  RgbImage image = load_ppm_file(args.input);
  EncodeStats stats;
  ContainerBitstream bits = encode_image(image, args.quality, labeler, codec,
                                         args.ctu_size, &stats);
  Bytes bytes = serialize(bits);
  write_file(args.output, bytes);

  std::printf(
      "mode=%s total_bytes=%zu base_bytes=%zu scf_bytes=%zu bpp=%.6f "
      "scf_pixel_pct=%.2f scf_ctus=%u total_ctus=%u\n",
      mode_name(stats.mode), bytes.size(), stats.base_bytes, stats.scf_bytes,
      bpp(bytes.size(), image.width(), image.height()),
      100.0 * stats.scf_pixel_fraction, stats.scf_ctus, stats.total_ctus);
  return 0;
}

struct DecodeArgs {
  std::string input, output;
};

int cmd_decode(const DecodeArgs& args) {
  Bytes bytes = read_file(args.input);
  ContainerBitstream bits = deserialize(bytes);
  RgbImage image = decode_image(bits);
  save_ppm_file(args.output, image);

  std::printf("mode=%s width=%u height=%u ctu_size=%u scf_ctus=%u "
              "total_ctus=%u\n",
              mode_name(bits.header.mode), bits.header.width,
              bits.header.height, bits.header.ctu_size, bits.mask.count_scf(),
              bits.mask.grid.count());
  return 0;
}

struct TrainArgs {
  std::string corpus, out_prefix;
  std::vector<int> levels = {22, 27, 32, 37};
  int k = 5;
  int folds = 10;
  uint64_t max_blocks = 0;  // 0 = use all
  uint64_t seed = 0;
  uint32_t ctu_size = kDefaultCtuSize;
  int codec_id = 0;
};

int cmd_train(const TrainArgs& args) {
  const BaseCodec& codec = base_codec_by_id(uint8_t(args.codec_id));
  std::vector<RgbImage> corpus = load_corpus(list_ppm_files(args.corpus));
  std::vector<RgbImage> blocks = tile_corpus(corpus, args.ctu_size);
  if (blocks.size() < 2)
    throw UsageError("corpus yields only " + std::to_string(blocks.size()) +
                     " block(s); training needs more");

  if (args.max_blocks > 0 && blocks.size() > args.max_blocks) {
    // seeded Fisher-Yates prefix, so subsampling is reproducible
    uint64_t state = args.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
    for (size_t i = 0; i < args.max_blocks; ++i) {
      size_t j = i + size_t(splitmix(state) % (blocks.size() - i));
      std::swap(blocks[i], blocks[j]);
    }
    blocks.resize(args.max_blocks);
  }
  std::fprintf(stderr, "training on %zu blocks from %zu images\n",
               blocks.size(), corpus.size());

  std::vector<BlockRates> rates = measure_blocks(blocks, codec, args.levels);
  for (size_t li = 0; li < args.levels.size(); ++li) {
    std::vector<TrainingSample> samples =
        samples_for_level(rates, args.levels, li);
    size_t scf_count = 0;
    for (const TrainingSample& s : samples)
      if (s.label == CtuLabel::Scf) ++scf_count;
    double scf_share = double(scf_count) / double(samples.size());
    double majority = std::max(scf_share, 1.0 - scf_share);
    double accuracy = cross_validate(samples, args.k, args.folds);

    KnnModel model = knn_train(samples, args.k);
    std::string path =
        args.out_prefix + "q" + std::to_string(args.levels[li]) + ".knn";
    save_model_file(path, model);
    std::printf(
        "level=%d samples=%zu scf_share=%.4f cv_accuracy=%.4f "
        "majority_baseline=%.4f model=%s\n",
        args.levels[li], samples.size(), scf_share, accuracy, majority,
        path.c_str());
  }
  return 0;
}

struct FeaturesArgs {
  std::string input;
  uint32_t ctu_size = kDefaultCtuSize;
};

int cmd_features(const FeaturesArgs& args) {
  RgbImage image = load_ppm_file(args.input);
  std::printf("ctu,x,y,width,height,colors_norm,patterns_norm,"
              "stage23_entropy,cond_entropy\n");
  for (const CtuRect& rect : split_into_ctus(image, args.ctu_size)) {
    BlockFeatures f = extract_features(crop(image, rect));
    std::printf("%u,%u,%u,%u,%u,%.9f,%.9f,%.9f,%.9f\n", rect.index, rect.x,
                rect.y, rect.width, rect.height, f.colors_norm,
                f.patterns_norm, f.stage23_color_entropy,
                f.conditional_entropy);
  }
  return 0;
}

struct BenchArgs {
  std::string corpus;
  std::vector<int> levels = {22, 27, 32, 37};
  uint32_t ctu_size = kDefaultCtuSize;
  int codec_id = 0;
  std::string bd_pair = "hybrid,base";
};

struct PipelineSweep {
  std::string name;
  // per level, per image
  std::vector<std::vector<size_t>> bytes;
  std::vector<std::vector<double>> psnr;
};

PipelineSweep run_pipeline(const std::string& name,
                           const std::vector<RgbImage>& corpus,
                           const std::vector<int>& levels,
                           const BaseCodec& codec, uint32_t ctu_size) {
  PipelineSweep sweep;
  sweep.name = name;
  sweep.bytes.assign(levels.size(), std::vector<size_t>(corpus.size()));
  sweep.psnr.assign(levels.size(), std::vector<double>(corpus.size()));
  for (size_t li = 0; li < levels.size(); ++li) {
    parallel_for(corpus.size(), [&, li](size_t i) {
      CtuLabeler labeler;
      if (name == "base")
        labeler = fixed_labeler(CtuLabel::Base);
      else if (name == "scf")
        labeler = fixed_labeler(CtuLabel::Scf);
      else
        labeler = oracle_labeler(codec, levels[li]);
      ContainerBitstream bits =
          encode_image(corpus[i], levels[li], labeler, codec, ctu_size);
      sweep.bytes[li][i] = serialize(bits).size();
      sweep.psnr[li][i] = psnr_rgb(corpus[i], decode_image(bits));
    });
  }
  return sweep;
}

int cmd_bench(const BenchArgs& args) {
  const BaseCodec& codec = base_codec_by_id(uint8_t(args.codec_id));
  std::vector<std::string> files = list_ppm_files(args.corpus);
  std::vector<RgbImage> corpus = load_corpus(files);
  if (args.levels.size() < 2) throw UsageError("bench needs >= 2 levels");

  // ---- block study (oracle labels by paired encoding) ----
  BlockStudyReport study = block_study(corpus, codec, args.levels, args.ctu_size);
  std::printf("record,image,block,level,scf_bits,base_bits,label\n");
  for (const BlockStudyRow& row : study.rows)
    std::printf("block,%s,%u,%d,%" PRIu64 ",%" PRIu64 ",%s\n",
                fs::path(files[row.image_index]).filename().c_str(),
                row.block_index, row.quality_level, row.scf_bits,
                row.base_bits, row.label == CtuLabel::Scf ? "SCF" : "BASE");
  std::fprintf(stderr, "%-8s %8s %12s %12s\n", "level", "blocks", "scf_wins",
               "scf_pixels");
  for (const BlockStudyLevel& level : study.levels) {
    std::printf("study,%d,%" PRIu64 ",%.6f,%.6f\n", level.quality_level,
                level.blocks_total, level.scf_block_fraction(),
                level.scf_pixel_fraction());
    std::fprintf(stderr, "%-8d %8" PRIu64 " %11.1f%% %11.1f%%\n",
                 level.quality_level, level.blocks_total,
                 100.0 * level.scf_block_fraction(),
                 100.0 * level.scf_pixel_fraction());
  }

  // ---- RD sweep per pipeline ----
  size_t comma = args.bd_pair.find(',');
  if (comma == std::string::npos)
    throw UsageError("--bd expects TEST,REFERENCE");
  std::string test_name = args.bd_pair.substr(0, comma);
  std::string ref_name = args.bd_pair.substr(comma + 1);

  std::vector<PipelineSweep> sweeps;
  for (const char* name : {"hybrid", "base", "scf"})
    sweeps.push_back(
        run_pipeline(name, corpus, args.levels, codec, args.ctu_size));
  auto sweep_index = [&](const std::string& name) -> size_t {
    for (size_t si = 0; si < sweeps.size(); ++si)
      if (sweeps[si].name == name) return si;
    throw UsageError("unknown pipeline in --bd: " + name);
  };
  size_t test_idx = sweep_index(test_name);
  size_t ref_idx = sweep_index(ref_name);

  // An image that codes losslessly (capped PSNR) under either compared
  // pipeline is removed from both pipelines' averages, so the BD comparison
  // covers a common image set. Pipelines outside the comparison average
  // quality over their own uncapped images and report rate over everything.
  auto capped_under = [&](size_t si) {
    std::vector<bool> capped(corpus.size(), false);
    for (size_t i = 0; i < corpus.size(); ++i)
      for (size_t li = 0; li < args.levels.size(); ++li)
        if (sweeps[si].psnr[li][i] >= kPsnrCap) {
          capped[i] = true;
          break;
        }
    return capped;
  };
  std::vector<bool> shared_excluded = capped_under(test_idx);
  {
    std::vector<bool> ref_capped = capped_under(ref_idx);
    for (size_t i = 0; i < corpus.size(); ++i)
      if (ref_capped[i]) shared_excluded[i] = true;
  }

  std::vector<RdCurve> curves(sweeps.size());
  for (size_t si = 0; si < sweeps.size(); ++si) {
    const PipelineSweep& sweep = sweeps[si];
    bool in_comparison = si == test_idx || si == ref_idx;
    std::vector<bool> excluded =
        in_comparison ? shared_excluded : capped_under(si);
    size_t excluded_count = 0;
    for (size_t i = 0; i < corpus.size(); ++i)
      if (excluded[i]) ++excluded_count;

    for (size_t li = 0; li < args.levels.size(); ++li) {
      // bit rate and quality averaged over images, bpp computed per image
      double bpp_sum = 0.0, psnr_sum = 0.0;
      size_t used = 0;
      for (size_t i = 0; i < corpus.size(); ++i) {
        if (excluded[i]) continue;
        bpp_sum += bpp(sweep.bytes[li][i], corpus[i].width(),
                       corpus[i].height());
        psnr_sum += sweep.psnr[li][i];
        ++used;
      }
      double rate;
      if (used == 0) {  // everything capped: report rate over all images
        double all_bpp = 0.0;
        for (size_t i = 0; i < corpus.size(); ++i)
          all_bpp += bpp(sweep.bytes[li][i], corpus[i].width(),
                         corpus[i].height());
        rate = all_bpp / double(corpus.size());
      } else {
        rate = bpp_sum / double(used);
      }
      double quality = used ? psnr_sum / double(used) : kPsnrCap;
      std::printf("rd,%s,%d,%.6f,%.4f,%zu,%zu\n", sweep.name.c_str(),
                  args.levels[li], rate, quality, used, excluded_count);
      if (used) curves[si].points.push_back(RdPoint{rate, quality});
    }
    std::sort(curves[si].points.begin(), curves[si].points.end(),
              [](const RdPoint& a, const RdPoint& b) { return a.rate < b.rate; });
  }

  // ---- BD-rate between the requested pipelines ----
  try {
    double bd = bd_rate(curves[ref_idx], curves[test_idx]);
    std::printf("bdrate,%s,%s,%.4f\n", test_name.c_str(), ref_name.c_str(), bd);
    std::fprintf(stderr, "BD-rate %s vs %s: %.2f%%\n", test_name.c_str(),
                 ref_name.c_str(), bd);
  } catch (const Error& e) {
    std::fprintf(stderr, "BD-rate %s vs %s unavailable: %s\n",
                 test_name.c_str(), ref_name.c_str(), e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid screen-content image codec with a lossless "
               "context-model layer"};
  app.require_subcommand(1);

  EncodeArgs enc;
  CLI::App* encode = app.add_subcommand("encode", "Encode a PPM into a .scfh container");
  encode->add_option("input", enc.input, "input .ppm")->required();
  encode->add_option("output", enc.output, "output .scfh")->required();
  encode->add_option("--q,--quality", enc.quality, "quality level (maps to the base codec quantizer)")
      ->capture_default_str();
  encode->add_option("--model", enc.model_path, "trained classifier model file");
  encode->add_flag("--oracle", enc.oracle, "label CTUs by actual dual encoding instead of a model");
  encode->add_option("--ctu-size", enc.ctu_size, "CTU size in pixels")->capture_default_str();
  encode->add_option("--codec", enc.codec_id, "base codec id")->capture_default_str();

  DecodeArgs dec;
  CLI::App* decode = app.add_subcommand("decode", "Decode a .scfh container to PPM");
  decode->add_option("input", dec.input, "input .scfh")->required();
  decode->add_option("output", dec.output, "output .ppm")->required();

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "Train per-level CTU classifiers from a PPM corpus");
  train->add_option("--corpus", tr.corpus, "directory of .ppm files")->required();
  train->add_option("--out", tr.out_prefix, "output model path prefix")->required();
  train->add_option("--levels", tr.levels, "quality levels")->capture_default_str();
  train->add_option("--k", tr.k, "neighbor count")->capture_default_str();
  train->add_option("--folds", tr.folds, "cross-validation folds")->capture_default_str();
  train->add_option("--max-blocks", tr.max_blocks, "subsample the training blocks (0 = all)");
  train->add_option("--seed", tr.seed, "seed for block subsampling")->capture_default_str();
  train->add_option("--ctu-size", tr.ctu_size, "CTU size in pixels")->capture_default_str();
  train->add_option("--codec", tr.codec_id, "base codec id")->capture_default_str();

  FeaturesArgs fe;
  CLI::App* features = app.add_subcommand("features", "Emit per-CTU block features as CSV");
  features->add_option("input", fe.input, "input .ppm")->required();
  features->add_option("--ctu-size", fe.ctu_size, "CTU size in pixels")->capture_default_str();

  BenchArgs be;
  CLI::App* bench = app.add_subcommand("bench", "Block study and RD sweep over a corpus");
  bench->add_option("--corpus", be.corpus, "directory of .ppm files")->required();
  bench->add_option("--levels", be.levels, "quality levels")->capture_default_str();
  bench->add_option("--ctu-size", be.ctu_size, "CTU size in pixels")->capture_default_str();
  bench->add_option("--codec", be.codec_id, "base codec id")->capture_default_str();
  bench->add_option("--bd", be.bd_pair, "BD-rate pipelines as TEST,REFERENCE")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(enc);
    if (*decode) return cmd_decode(dec);
    if (*train) return cmd_train(tr);
    if (*features) return cmd_features(fe);
    if (*bench) return cmd_bench(be);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
