// Acceptance suite: runs each numbered criterion and prints one pass/fail
// line per criterion. Usage: scf_acceptance [N] (no argument runs all).

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "scf/container.hpp"
#include "scf/eval.hpp"
#include "scf/knn.hpp"
#include "scf/parallel.hpp"
#include "scf/range_coder.hpp"
#include "scf/scf_codec.hpp"
#include "scf/segmentation.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;
using namespace scf;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

const BaseCodec& stub() { return base_codec_by_id(0); }

// ---------------------------------------------------------------------------
// 1. Hybrid losslessness across generated images, sizes and mask sources.

Result criterion1() {
  auto t0 = Clock::now();
  const std::vector<std::pair<uint32_t, uint32_t>> special_sizes = {
      {1, 1},     {1, 2},     {2, 1},     {3, 3},     {7, 5},     {16, 16},
      {31, 17},   {64, 64},   {100, 50},  {127, 127}, {128, 128}, {129, 129},
      {130, 67},  {200, 150}, {257, 131}, {384, 1},   {1, 300},   {255, 129},
      {384, 300}, {320, 240}};

  const size_t kImages = 520;
  std::vector<int> mismatch(kImages, 0);
  std::vector<uint8_t> all_scf_ok(kImages, 1);

  parallel_for(kImages, [&](size_t i) {
    uint32_t w, h;
    if (i < special_sizes.size()) {
      w = special_sizes[i].first;
      h = special_sizes[i].second;
    } else {
      w = 1 + uint32_t((0x9E3779B97F4A7C15ull * (i + 3)) % 300);
      h = 1 + uint32_t((0xC2B2AE3D27D4EB4Full * (i + 7)) % 240);
    }
    auto kind = synth::Kind(i % 7);
    RgbImage img = synth::make(kind, w, h, 77 + i);

    const int quality_cycle[4] = {22, 27, 32, 37};
    int quality = quality_cycle[i % 4];
    CtuLabeler labeler;
    switch (i % 4) {
      case 0:
        labeler = oracle_labeler(stub(), quality);
        break;
      case 1:
        // cheap content heuristic, exercises content-driven mixed masks
        labeler = [](const RgbImage& block) {
          return extract_features(block).colors_norm < 0.25 ? CtuLabel::Scf
                                                            : CtuLabel::Base;
        };
        break;
      case 2: {
        uint64_t state = i;  // seeded random mask
        labeler = [state](const RgbImage&) mutable {
          state = state * 6364136223846793005ull + 1442695040888963407ull;
          return (state >> 33) & 1 ? CtuLabel::Scf : CtuLabel::Base;
        };
        break;
      }
      default:
        labeler = fixed_labeler(CtuLabel::Scf);
        break;
    }

    ContainerBitstream bits =
        encode_image(img, quality, labeler, stub(), kDefaultCtuSize);
    RgbImage decoded = decode_image(deserialize(serialize(bits)));

    for (uint32_t y = 0; y < h; ++y)
      for (uint32_t x = 0; x < w; ++x)
        if (bits.mask.at_pixel(x, y) == CtuLabel::Scf &&
            !(decoded.at(x, y) == img.at(x, y)))
          ++mismatch[i];
    if (bits.header.mode == ModeFlag::AllScf && !(decoded == img))
      all_scf_ok[i] = 0;
  });

  uint64_t total_mismatch = 0;
  int bad_all_scf = 0;
  for (int m : mismatch) total_mismatch += uint64_t(m);
  for (uint8_t ok : all_scf_ok) bad_all_scf += ok ? 0 : 1;

  // oversized-palette path: an all-SCF noise image with more distinct
  // colors than the frequency cap
  {
    RgbImage big = synth::make_noise(300, 260, 424242);
    ContainerBitstream bits = encode_image(
        big, 27, fixed_labeler(CtuLabel::Scf), stub(), kDefaultCtuSize);
    if (!(decode_image(deserialize(serialize(bits))) == big)) ++bad_all_scf;
  }

  double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = total_mismatch == 0 && bad_all_scf == 0 && seconds < 300.0;
  return {pass,
          format("%zu images, %" PRIu64 " SCF-pixel mismatches, %d all-SCF "
                 "failures, %.1fs (limit 300s)",
                 kImages, total_mismatch, bad_all_scf, seconds)};
}

// ---------------------------------------------------------------------------
// 2. Entropy-coder optimality on i.i.d. streams.

Result criterion2() {
  const size_t n = 100000;
  double worst_overhead = 0.0;
  for (int dist = 0; dist < 20; ++dist) {
    synth::Rng rng(500 + dist);
    size_t alphabet = 2 + rng.below(1023);
    FrequencyTable table;
    for (size_t s = 0; s < alphabet; ++s) table.push_back(1 + rng.below(100));

    double h = 0.0;  // closed-form -sum p log2 p
    for (size_t s = 0; s < alphabet; ++s) {
      double p = double(table.count(s)) / double(table.total());
      h -= p * std::log2(p);
    }

    RangeEncoder enc;
    std::vector<uint32_t> symbols(n);
    for (size_t i = 0; i < n; ++i) {
      size_t s = table.find(rng.next() % table.total());
      symbols[i] = uint32_t(s);
      enc.encode_symbol(table, s);
    }
    Bytes payload = enc.finish();

    double limit = h * double(n) / 8.0 * 1.02 + 64.0;
    if (double(payload.size()) > limit)
      return {false, format("distribution %d: %zu bytes > %.1f limit", dist,
                            payload.size(), limit)};
    worst_overhead = std::max(
        worst_overhead, double(payload.size()) / (h * double(n) / 8.0) - 1.0);

    RangeDecoder dec(payload);
    for (size_t i = 0; i < n; ++i)
      if (dec.decode_symbol(table) != symbols[i])
        return {false, format("distribution %d: round trip mismatch", dist)};
  }
  return {true, format("20 distributions x 10^5 symbols, worst overhead "
                       "%.3f%% (allowed 2%% + 64 bytes)",
                       100.0 * worst_overhead)};
}

// ---------------------------------------------------------------------------
// 3. Stage 1 tables reproduce n(c|P)/N_P exactly; code lengths match -log2 p.

Result criterion3() {
  synth::Rng rng(9000);
  double worst_eq2 = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    ColorHistogram hist;
    size_t colors = 1 + rng.below(64);
    for (size_t c = 0; c < colors; ++c)
      hist.add(rng.next() & 0xFFFFFF, 1 + rng.below(1000));

    Stage1Table t = stage1_distribution(hist);
    if (t.table.count(t.escape_symbol()) != hist.distinct())
      return {false, "escape weight is not the distinct-color count"};
    uint64_t non_escape = t.table.total() - t.table.count(t.escape_symbol());
    if (non_escape != hist.total())
      return {false, "non-escape mass differs from N_P"};
    for (size_t i = 0; i < t.colors.size(); ++i) {
      // exact rational identity: count_i * N_P == n_i * non_escape
      uint64_t lhs = uint64_t(t.table.count(i)) * hist.total();
      uint64_t rhs = uint64_t(hist.entries()[i].count) * non_escape;
      if (lhs != rhs) return {false, "p(c|P) deviates from n(c|P)/N_P"};

      double cl = code_length_bits(t.table, i);
      double want = std::log2(double(t.table.total())) -
                    std::log2(double(t.table.count(i)));
      worst_eq2 = std::max(worst_eq2, std::abs(cl - want));
    }
  }
  bool pass = worst_eq2 <= 1e-12;
  return {pass, format("10^4 fuzzed histograms exact; max code-length error "
                       "%.2e (tol 1e-12)",
                       worst_eq2)};
}

// ---------------------------------------------------------------------------
// 4. Palette-prefix selection equals exhaustive search, boundary included.

Result criterion4() {
  synth::Rng rng(4000);
  for (int iter = 0; iter < 1000; ++iter) {
    size_t n = 1 + rng.below(200);
    std::vector<GlobalPalette::Entry> palette;
    for (size_t i = 0; i < n; ++i)
      palette.push_back({uint32_t(i * 3 + 5), 1 + rng.below(2000)});
    std::sort(palette.begin(), palette.end(), [](auto& a, auto& b) {
      return a.count != b.count ? a.count > b.count : a.color < b.color;
    });
    std::unordered_set<uint32_t> scf_colors;
    uint32_t density = 60 + rng.below(41);  // 60..100 percent
    for (const auto& e : palette)
      if (rng.below(100) < density) scf_colors.insert(e.color);

    // independent exhaustive oracle over b in 0..7 with exact rationals
    int best_b = -1;
    uint64_t bn = 0, bd = 1;
    for (int b = 0; b <= 6; ++b) {
      uint64_t len = n >> b;
      if (len == 0) continue;
      uint64_t hits = 0;
      for (size_t i = 0; i < len; ++i)
        if (scf_colors.count(palette[i].color)) ++hits;
      if (hits * bd > bn * len) {
        best_b = b;
        bn = hits;
        bd = len;
      }
    }
    int want = (best_b >= 0 && 10 * bn >= 9 * bd) ? best_b : 7;

    PalettePrefixChoice got = select_palette_prefix(scf_colors, palette);
    if (got.b != want)
      return {false, format("case %d: got b=%d want b=%d", iter, got.b, want)};
    size_t want_len = want == 7 ? 0 : n >> want;
    if (got.prefix.size() != want_len)
      return {false, format("case %d: prefix length %zu want %zu", iter,
                            got.prefix.size(), want_len)};
  }

  // engineered cutoff boundary: best score exactly 0.900 is kept
  std::vector<GlobalPalette::Entry> pal10;
  for (uint32_t i = 0; i < 10; ++i) pal10.push_back({i, 100 - i});
  std::unordered_set<uint32_t> hits9;
  for (uint32_t i = 1; i < 10; ++i) hits9.insert(i);
  if (select_palette_prefix(hits9, pal10).b != 0)
    return {false, "score exactly 0.900 was not kept"};

  // best score exactly 0.899 escapes to b=7
  std::vector<GlobalPalette::Entry> pal1000;
  for (uint32_t i = 0; i < 1000; ++i) pal1000.push_back({i, 2000 - i});
  std::unordered_set<uint32_t> hits899;
  for (uint32_t i = 0; i < 1000; ++i)
    if (i % 10 != 0 && i != 1) hits899.insert(i);
  if (hits899.size() != 899) return {false, "boundary fixture broken"};
  if (select_palette_prefix(hits899, pal1000).b != 7)
    return {false, "score 0.899 did not escape to b=7"};

  return {true, "1000 random cases match exhaustive search; 0.900/0.899 "
                "cutoff boundary exact"};
}

// ---------------------------------------------------------------------------
// 5. Block study: SCF-wins fraction trend and sub-corpus separation.

struct StudyCorpus {
  std::vector<RgbImage> blocks;
  size_t text_begin = 0, text_end = 0;
  size_t noise_begin = 0, noise_end = 0;
};

StudyCorpus make_study_corpus(uint64_t seed_base) {
  StudyCorpus c;
  c.text_begin = c.blocks.size();
  for (uint64_t s = 0; s < 24; ++s)
    c.blocks.push_back(synth::make_text_like(128, 128, seed_base + s));
  c.text_end = c.blocks.size();
  c.noise_begin = c.blocks.size();
  for (uint64_t s = 0; s < 16; ++s)
    c.blocks.push_back(synth::make_noise(128, 128, seed_base + 100 + s));
  c.noise_end = c.blocks.size();
  for (uint64_t s = 0; s < 16; ++s)
    c.blocks.push_back(synth::make_gradient(128, 128, seed_base + 200 + s));
  for (uint64_t s = 0; s < 16; ++s)
    c.blocks.push_back(synth::make_palette_art(128, 128, seed_base + 300 + s));
  for (uint64_t s = 0; s < 16; ++s)
    c.blocks.push_back(
        synth::make_low_contrast_text(128, 128, seed_base + 400 + s));
  for (uint64_t s = 0; s < 12; ++s)
    c.blocks.push_back(synth::make_dithered(128, 128, seed_base + 500 + s));
  return c;
}

Result criterion5() {
  const std::vector<int> levels = {22, 27, 32, 37};
  StudyCorpus corpus = make_study_corpus(3000);
  BlockStudyReport report = block_study(corpus.blocks, stub(), levels, 128);

  std::string fractions;
  double prev = 2.0;
  for (const BlockStudyLevel& level : report.levels) {
    double f = level.scf_block_fraction();
    fractions += format("%s%.3f", fractions.empty() ? "" : " -> ", f);
    if (f > prev + 1e-12)
      return {false,
              format("fraction increased across levels: %s", fractions.c_str())};
    prev = f;
  }

  auto sub_fraction = [&](size_t begin, size_t end, int level) {
    uint64_t wins = 0, total = 0;
    for (const BlockStudyRow& row : report.rows) {
      if (row.quality_level != level) continue;
      if (row.image_index < begin || row.image_index >= end) continue;
      ++total;
      if (row.label == CtuLabel::Scf) ++wins;
    }
    return double(wins) / double(total);
  };

  double text_fine = sub_fraction(corpus.text_begin, corpus.text_end, 22);
  if (text_fine <= 0.8)
    return {false,
            format("text sub-corpus at level 22: %.3f <= 0.8", text_fine)};
  for (int level : levels) {
    double noise = sub_fraction(corpus.noise_begin, corpus.noise_end, level);
    if (noise >= 0.1)
      return {false, format("noise sub-corpus at level %d: %.3f >= 0.1", level,
                            noise)};
  }
  return {true, format("fractions %s; text@22 %.2f > 0.8; noise < 0.1 at all "
                       "levels",
                       fractions.c_str(), text_fine)};
}

// ---------------------------------------------------------------------------
// 6. Classifier sanity: cross-validation accuracy and baseline.

Result criterion6() {
  const std::vector<int> levels = {22, 27, 32, 37};
  StudyCorpus corpus = make_study_corpus(6000);
  std::vector<BlockRates> rates = measure_blocks(corpus.blocks, stub(), levels);

  std::string detail;
  for (size_t li = 0; li < levels.size(); ++li) {
    std::vector<TrainingSample> samples = samples_for_level(rates, levels, li);
    size_t scf = 0;
    for (const TrainingSample& s : samples)
      if (s.label == CtuLabel::Scf) ++scf;
    double share = double(scf) / double(samples.size());
    double majority = std::max(share, 1.0 - share);
    double accuracy = cross_validate(samples, 5, 10);
    detail += format("%sq%d acc=%.3f base=%.3f", li ? "; " : "", levels[li],
                     accuracy, majority);
    if (accuracy < 0.80)
      return {false,
              format("level %d accuracy %.3f < 0.80", levels[li], accuracy)};
    if (accuracy <= majority)
      return {false, format("level %d accuracy %.3f not above majority %.3f",
                            levels[li], accuracy, majority)};
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 7. Hybrid efficiency with oracle labels.

Result criterion7() {
  const std::vector<int> levels = {22, 27, 32, 37};

  std::vector<RgbImage> mixed_corpus;
  for (uint64_t s = 0; s < 8; ++s)
    mixed_corpus.push_back(synth::make_mixed_screen(256, 256, 7000 + s));

  for (const RgbImage& img : mixed_corpus)
    for (int level : levels) {
      size_t hybrid =
          serialize(
              encode_image(img, level, oracle_labeler(stub(), level), stub()))
              .size();
      size_t base =
          serialize(
              encode_image(img, level, fixed_labeler(CtuLabel::Base), stub()))
              .size();
      size_t scf =
          serialize(
              encode_image(img, level, fixed_labeler(CtuLabel::Scf), stub()))
              .size();
      size_t floor_bytes = std::min(base, scf);
      size_t mask =
          mask_bytes(CtuGrid(img.width(), img.height(), kDefaultCtuSize));
      size_t limit =
          floor_bytes + kContainerHeaderBytes + mask + floor_bytes / 100;
      if (hybrid > limit)
        return {false,
                format("hybrid %zu > limit %zu (min %zu) at level %d", hybrid,
                       limit, floor_bytes, level)};
    }

  // text-heavy sub-corpus: hybrid must beat all-BASE by >= 5% total bits
  std::vector<RgbImage> text_corpus;
  for (uint64_t s = 0; s < 6; ++s)
    text_corpus.push_back(synth::make_text_like(256, 192, 7700 + s));
  double worst_saving = 1e9;
  for (int level : levels) {
    uint64_t hybrid_total = 0, base_total = 0;
    for (const RgbImage& img : text_corpus) {
      hybrid_total +=
          serialize(
              encode_image(img, level, oracle_labeler(stub(), level), stub()))
              .size();
      base_total +=
          serialize(
              encode_image(img, level, fixed_labeler(CtuLabel::Base), stub()))
              .size();
    }
    double saving = 1.0 - double(hybrid_total) / double(base_total);
    worst_saving = std::min(worst_saving, saving);
    if (saving < 0.05)
      return {false, format("text-heavy saving %.2f%% < 5%% at level %d",
                            100.0 * saving, level)};
  }
  return {true, format("hybrid <= min(base,scf)+header+mask+1%% on 8 mixed "
                       "images x 4 levels; text-heavy saving >= %.1f%%",
                       100.0 * worst_saving)};
}

// ---------------------------------------------------------------------------
// 8. BD-rate harness closed-form oracles.

Result criterion8() {
  RdCurve ref;
  ref.points = {
      {0.4, 28.0}, {0.9, 33.0}, {1.8, 37.5}, {3.5, 41.0}, {7.0, 45.0}};

  double self = bd_rate(ref, ref);
  if (std::abs(self) > 1e-9)
    return {false, format("self BD-rate %.2e exceeds 1e-9", self)};

  RdCurve inflated = ref;
  for (RdPoint& p : inflated.points) p.rate *= 1.1;
  double up = bd_rate(ref, inflated);
  if (std::abs(up - 10.0) > 0.01)
    return {false, format("1.1x inflation gave %.4f%%, want 10 +- 0.01", up)};
  double down = bd_rate(inflated, ref);
  if (std::abs(down - (100.0 / 1.1 - 100.0)) > 0.01)
    return {false, format("deflation gave %.4f%%, want -9.0909 +- 0.01", down)};

  synth::Rng rng(8000);
  double worst_knot = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> xs, ys;
    double x = 0.0;
    size_t n = 4 + rng.below(12);
    for (size_t i = 0; i < n; ++i) {
      x += 0.1 + rng.unit() * 2.0;
      xs.push_back(x);
      ys.push_back(rng.unit() * 100.0 - 50.0);
    }
    for (size_t i = 0; i < n; ++i) {
      double err = std::abs(akima_interpolate(xs, ys, xs[i]) - ys[i]);
      double rel = err / std::max(1.0, std::abs(ys[i]));
      worst_knot = std::max(worst_knot, rel);
    }
  }
  if (worst_knot > 1e-12)
    return {false,
            format("Akima knot reproduction error %.2e > 1e-12", worst_knot)};
  return {true, format("self=0, +10.00%%/-9.09%% exact, knot error %.1e",
                       worst_knot)};
}

// ---------------------------------------------------------------------------
// 9. Decoder robustness under random byte mutations.

Result criterion9() {
  std::vector<Bytes> valid;
  {
    RgbImage mixed = synth::make_mixed_screen(140, 96, 90);
    uint32_t flip = 0;
    CtuLabeler alternate = [&flip](const RgbImage&) {
      return (flip++ % 2 == 0) ? CtuLabel::Scf : CtuLabel::Base;
    };
    valid.push_back(serialize(encode_image(mixed, 27, alternate, stub(), 64)));
    RgbImage text = synth::make_text_like(96, 64, 91);
    valid.push_back(
        serialize(encode_image(text, 22, fixed_labeler(CtuLabel::Scf), stub())));
    RgbImage grad = synth::make_gradient(120, 80, 92);
    valid.push_back(
        serialize(encode_image(grad, 37, fixed_labeler(CtuLabel::Base), stub())));
  }

  synth::Rng rng(9900);
  int decoded = 0, structured = 0;
  double worst_seconds = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Bytes bytes = valid[iter % valid.size()];
    if (rng.below(10) == 0) {
      bytes.resize(rng.below(uint32_t(bytes.size())) + 1);  // truncate
    } else {
      size_t pos = rng.below(uint32_t(bytes.size()));
      bytes[pos] ^= uint8_t(1 + rng.below(255));
    }
    auto t0 = Clock::now();
    try {
      RgbImage out = decode_image(bytes);
      (void)out;
      ++decoded;
    } catch (const Error&) {
      ++structured;
    } catch (...) {
      return {false, format("iteration %d: unstructured exception", iter)};
    }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    worst_seconds = std::max(worst_seconds, s);
    if (s > 5.0)
      return {false, format("iteration %d took %.1fs (> 5s)", iter, s)};
  }
  return {true, format("10^4 mutations: %d structured errors, %d decoded, "
                       "worst decode %.3fs",
                       structured, decoded, worst_seconds)};
}

// ---------------------------------------------------------------------------
// 10. CLI determinism: two runs of every command produce identical bytes.

Result criterion10() {
  const char* cli = std::getenv("SCFH_CLI");
  if (!cli)
    return {false, "SCFH_CLI not set (ctest sets it to the scfh binary)"};

  fs::path dir = fs::temp_directory_path() / "scfh_acceptance_c10";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir / "corpus");

  for (uint64_t s = 0; s < 3; ++s)
    save_ppm_file((dir / "corpus" / format("text%d.ppm", int(s))).string(),
                  synth::make_text_like(256, 96, 40 + s));
  save_ppm_file((dir / "corpus" / "noise.ppm").string(),
                synth::make_noise(256, 96, 50));
  save_ppm_file((dir / "corpus" / "grad.ppm").string(),
                synth::make_gradient(256, 96, 51));
  save_ppm_file((dir / "corpus" / "dither.ppm").string(),
                synth::make_dithered(256, 96, 52));
  save_ppm_file((dir / "corpus" / "mixed0.ppm").string(),
                synth::make_mixed_screen(256, 192, 53));
  save_ppm_file((dir / "corpus" / "mixed1.ppm").string(),
                synth::make_mixed_screen(192, 256, 54));
  save_ppm_file((dir / "input.ppm").string(),
                synth::make_mixed_screen(256, 192, 60));

  // Each tagged pass runs in its own working directory with relative output
  // names, so byte-identical stdout is required of identical commands.
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");

  auto run = [&](const std::string& tag, const std::string& args,
                 const std::string& out_name) -> bool {
    fs::path cwd = dir / tag;
    std::string cmd = "cd " + cwd.string() + " && " + std::string(cli) + " " +
                      args + " > " + out_name + ".stdout 2> " + out_name +
                      ".stderr";
    return std::system(cmd.c_str()) == 0;
  };

  struct Step {
    std::string name;
    std::string args;                    // relative outputs, absolute inputs
    std::vector<std::string> artifacts;  // produced files, relative
  };
  auto p = [&](const std::string& s) { return (dir / s).string(); };
  std::vector<Step> steps = {
      {"train",
       "train --corpus " + p("corpus") +
           " --out m_ --levels 22 37 --k 3 --max-blocks 10 --seed 9",
       {"m_q22.knn", "m_q37.knn"}},
      {"encode_oracle",
       "encode " + p("input.ppm") + " oracle.scfh --q 22 --oracle",
       {"oracle.scfh"}},
      {"encode_model",
       "encode " + p("input.ppm") + " model.scfh --q 22 --model m_q22.knn",
       {"model.scfh"}},
      {"decode", "decode oracle.scfh decoded.ppm", {"decoded.ppm"}},
      {"features", "features " + p("input.ppm"), {}},
      {"bench", "bench --corpus " + p("corpus") + " --levels 22 27 32 37", {}},
      {"bench_self", "bench --corpus " + p("corpus") +
                         " --levels 22 27 32 37 --bd base,base", {}},
  };

  for (const Step& step : steps) {
    for (const char* tag : {"a", "b"}) {
      if (!run(tag, step.args, step.name))
        return {false,
                format("command failed: %s (run %s)", step.name.c_str(), tag)};
    }
    Bytes a = read_file((dir / "a" / (step.name + ".stdout")).string());
    Bytes b = read_file((dir / "b" / (step.name + ".stdout")).string());
    if (a != b)
      return {false,
              format("stdout differs between runs: %s", step.name.c_str())};
    for (const std::string& artifact : step.artifacts) {
      Bytes fa = read_file((dir / "a" / artifact).string());
      Bytes fb = read_file((dir / "b" / artifact).string());
      if (fa != fb)
        return {false,
                format("artifact differs between runs: %s", artifact.c_str())};
    }
  }

  // the mixed corpus must show hybrid rate savings, and a pipeline against
  // itself must measure exactly zero
  {
    std::string bench_out(
        reinterpret_cast<const char*>(
            read_file((dir / "a" / "bench.stdout").string()).data()),
        read_file((dir / "a" / "bench.stdout").string()).size());
    if (bench_out.find("bdrate,hybrid,base,-") == std::string::npos)
      return {false, "bench did not report a negative hybrid-vs-base BD-rate"};
    std::string self_out(
        reinterpret_cast<const char*>(
            read_file((dir / "a" / "bench_self.stdout").string()).data()),
        read_file((dir / "a" / "bench_self.stdout").string()).size());
    if (self_out.find("bdrate,base,base,0.0000") == std::string::npos &&
        self_out.find("bdrate,base,base,-0.0000") == std::string::npos)
      return {false, "self-vs-self BD-rate is not zero"};
  }

  // error-path exit codes: 2 for usage errors, 3 for data errors
  auto exit_code = [&](const std::string& args) {
    std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  if (exit_code("encode " + p("input.ppm") + " " + p("x.scfh") + " --q 22") != 2)
    return {false, "encode without a model should exit 2"};
  if (exit_code("decode " + p("input.ppm") + " " + p("x.ppm")) != 3)
    return {false, "decoding a non-container should exit 3"};
  if (exit_code("bogus-subcommand") != 2)
    return {false, "unknown subcommand should exit 2"};

  fs::remove_all(dir, ec);
  return {true, "train/encode/decode/features/bench byte-identical across "
                "paired runs; usage/data errors exit 2/3"};
}

using CriterionFn = Result (*)();

struct Criterion {
  int number;
  const char* name;
  CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "hybrid losslessness", criterion1},
    {2, "entropy-coder optimality", criterion2},
    {3, "stage-1 probability conformance", criterion3},
    {4, "palette-prefix rule", criterion4},
    {5, "block study trend", criterion5},
    {6, "classifier sanity", criterion6},
    {7, "hybrid efficiency", criterion7},
    {8, "BD-rate harness", criterion8},
    {9, "decoder robustness", criterion9},
    {10, "CLI determinism", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only && c.number != only) continue;
    auto t0 = Clock::now();
    Result r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, format("unexpected exception: %s", e.what())};
    }
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s - %s (%.1fs)\n", r.pass ? "PASS" : "FAIL",
                c.number, c.name, r.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
