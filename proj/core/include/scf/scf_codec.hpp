#ifndef SCF_SCF_CODEC_HPP
#define SCF_SCF_CODEC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scf/ctu.hpp"
#include "scf/image.hpp"
#include "scf/range_coder.hpp"

namespace scf {

// Escalation tolerance for the similarity search: exact match first, then a
// single pass over stored patterns within this distance.
inline constexpr int kEscalationTolerance = 12;

// Six causal template positions around the current pixel X:
// A=left, B=above, C=above-left, D=above-right, E=left-left, F=above-above.
struct ContextPattern {
  std::array<Rgb, 6> values{};

  std::array<uint8_t, 18> key_bytes() const {
    std::array<uint8_t, 18> k;
    for (size_t i = 0; i < 6; ++i) {
      k[3 * i] = values[i].r;
      k[3 * i + 1] = values[i].g;
      k[3 * i + 2] = values[i].b;
    }
    return k;
  }

  friend bool operator==(const ContextPattern&, const ContextPattern&) =
      default;
};

// Sum over the six positions of the max-channel absolute difference.
int pattern_distance(const ContextPattern& a, const ContextPattern& b);

// Reads the template around (x, y) from the working canvas. Positions outside
// the image take the value of the first in-bounds member in the order
// A,B,C,D,E,F; if none is in bounds, all positions become (128,128,128).
ContextPattern gather_context(const RgbImage& canvas, uint32_t x, uint32_t y);

// Channel-wise median-adaptive predictor over the A, B, C template members.
Rgb cmap_predict(const ContextPattern& p);

// Color histogram with entries kept sorted by packed RGB value, so iteration
// order (and therefore symbol order) is deterministic.
class ColorHistogram {
 public:
  struct Entry {
    uint32_t color;
    uint32_t count;
  };

  void add(uint32_t color, uint32_t count);
  // Index into entries() or npos.
  size_t index_of(uint32_t color) const;
  bool contains(uint32_t color) const { return index_of(color) != npos; }

  bool empty() const { return entries_.empty(); }
  size_t distinct() const { return entries_.size(); }
  uint64_t total() const { return total_; }
  const std::vector<Entry>& entries() const { return entries_; }
  void clear();

  static constexpr size_t npos = static_cast<size_t>(-1);

 private:
  std::vector<Entry> entries_;
  uint64_t total_ = 0;
};

// Associative store from context patterns to the histogram of colors seen
// with them. Exact lookups go through a hash map; the escalation pass scans
// a coarse spatial index bucketed on the quantized A position.
class PatternStore {
 public:
  // Histogram of the identical pattern, or nullptr if never seen.
  const ColorHistogram* exact(const ContextPattern& p) const;

  // Merges the histograms of all stored patterns within `tolerance` of p.
  void merge_within(const ContextPattern& p, int tolerance,
                    ColorHistogram& out) const;

  // Adds one observation of `color` under pattern p (creates the pattern on
  // first sight). Called after every coded pixel.
  void record(const ContextPattern& p, Rgb color);

  size_t size() const { return patterns_.size(); }
  void serialize(Bytes& out) const;

 private:
  struct Stored {
    std::array<uint8_t, 18> key;
    ColorHistogram hist;
  };

  struct KeyHash {
    size_t operator()(const std::array<uint8_t, 18>& k) const {
      uint64_t h = 1469598103934665603ull;
      for (uint8_t b : k) {
        h ^= b;
        h *= 1099511628211ull;
      }
      return static_cast<size_t>(h);
    }
  };

  static uint32_t cell_key(Rgb a) {
    return static_cast<uint32_t>(a.r >> 5) << 10 |
           static_cast<uint32_t>(a.g >> 5) << 5 |
           static_cast<uint32_t>(a.b >> 5);
  }

  std::vector<Stored> patterns_;
  std::unordered_map<std::array<uint8_t, 18>, uint32_t, KeyHash> exact_;
  std::unordered_map<uint32_t, std::vector<uint32_t>> cells_;
};

// Global color palette: all colors seen so far with their occurrence counts,
// counting only pixels coded in Stage 2 or 3. Slots keep insertion order and
// cumulative sums live in a Fenwick tree so Stage 2 stays O(log n) per pixel.
class GlobalPalette {
 public:
  struct Entry {
    uint32_t color;
    uint32_t count;
  };

  size_t size() const { return entries_.size(); }
  uint64_t total() const { return total_; }
  // Slot index or npos.
  size_t slot_of(uint32_t color) const;
  uint32_t color_at(size_t slot) const { return entries_[slot].color; }
  uint32_t count_at(size_t slot) const { return entries_[slot].count; }

  void add_new(uint32_t color, uint32_t count);
  // +1 on an existing slot (a Stage 2/3 coded occurrence).
  void bump(size_t slot);

  // Sum of counts of slots strictly before `slot`.
  uint64_t cumulative(size_t slot) const;
  // Slot containing cumulative position `target`; requires target < total().
  size_t find(uint64_t target) const;

  // Temporarily removes a slot's mass for strict exclusion coding.
  uint32_t exclude(size_t slot);
  void restore(size_t slot, uint32_t count);

  const std::vector<Entry>& entries() const { return entries_; }
  void serialize(Bytes& out) const;

  static constexpr size_t npos = static_cast<size_t>(-1);

 private:
  void fenwick_add(size_t slot, int64_t delta);
  void apply_cap();

  std::vector<Entry> entries_;
  std::unordered_map<uint32_t, uint32_t> slots_;
  std::vector<uint64_t> tree_;  // 1-indexed Fenwick over slot counts
  uint64_t total_ = 0;
};

// Per-channel adaptive histograms over prediction errors in [-255, 255],
// initialized to all ones.
struct ErrorHistograms {
  static constexpr size_t kBins = 511;
  std::array<FrequencyTable, 3> channel;

  ErrorHistograms()
      : channel{FrequencyTable(kBins, 1), FrequencyTable(kBins, 1),
                FrequencyTable(kBins, 1)} {}

  void serialize(Bytes& out) const;
};

// Stage 1 coding table: merged-histogram colors in ascending packed order
// followed by the escape symbol, whose count is the number of distinct
// colors. An empty `colors` means the stage is skipped outright.
struct Stage1Table {
  std::vector<uint32_t> colors;
  FrequencyTable table;  // colors.size() + 1 symbols; last = escape

  size_t escape_symbol() const { return colors.size(); }
  bool skip() const { return colors.empty(); }
};

Stage1Table stage1_distribution(const ColorHistogram& merged);

// Stage 2 coding table (materialized form used by tests; the coder itself
// works on the palette's Fenwick tree with exclusions zeroed in place).
struct Stage2Table {
  std::vector<uint32_t> colors;  // palette insertion order, excluded removed
  FrequencyTable table;          // colors.size() + 1 symbols; last = escape

  size_t escape_symbol() const { return colors.size(); }
  bool skip() const { return table.size() == 0; }
};

Stage2Table stage2_distribution(const GlobalPalette& palette,
                                const std::vector<uint32_t>& excluded_colors);

// Palette-prefix selection for base-layer-aware palette initialization.
struct PalettePrefixChoice {
  int b = 7;  // 0..6 selects the top 1/2^b of the base palette, 7 = none
  std::vector<GlobalPalette::Entry> prefix;
};

// The top floor(n / 2^b) entries for b in 0..6, empty for b == 7.
PalettePrefixChoice palette_prefix(
    const std::vector<GlobalPalette::Entry>& base_palette, int b);

// Picks b in 0..6 maximizing |prefix intersect scf_colors| / |prefix| (smallest b on
// ties, exact rational comparisons); returns b = 7 with an empty prefix when
// the best score is below 0.9.
PalettePrefixChoice select_palette_prefix(
    const std::unordered_set<uint32_t>& scf_layer_colors,
    const std::vector<GlobalPalette::Entry>& base_palette);

// Initial palette: prefix colors with counts normalized by the block width,
// floored at 1 so every entry stays representable.
GlobalPalette init_palette(const PalettePrefixChoice& choice,
                           uint32_t ctu_width);

// Occurrence counts over the reconstruction restricted to BASE-labeled CTUs,
// sorted by descending count with ascending packed color as the tie-break.
std::vector<GlobalPalette::Entry> base_layer_palette(
    const RgbImage& base_recon, const SegmentationMask& mask);

enum class CodingStage : uint8_t { Stage1 = 1, Stage2 = 2, Stage3 = 3 };

struct PixelOutcome {
  uint32_t x = 0;
  uint32_t y = 0;
  CodingStage stage = CodingStage::Stage3;
  bool stage1_available = false;  // merged histogram nonempty
  bool color_in_merged = false;   // actual color present in it
};

// Shared encoder/decoder model state: pattern store, global palette and
// error histograms, advanced identically on both sides after every pixel.
class ScfContextModel {
 public:
  ScfContextModel() = default;
  explicit ScfContextModel(GlobalPalette initial_palette)
      : palette_(std::move(initial_palette)) {}

  PixelOutcome encode_pixel(RangeEncoder& enc, RgbImage& canvas, uint32_t x,
                            uint32_t y, Rgb actual);
  std::pair<Rgb, PixelOutcome> decode_pixel(RangeDecoder& dec,
                                            RgbImage& canvas, uint32_t x,
                                            uint32_t y);

  const PatternStore& pattern_store() const { return store_; }
  const GlobalPalette& palette() const { return palette_; }
  const ErrorHistograms& error_histograms() const { return errors_; }

  // Deterministic dump of the full model state; encoder and decoder must be
  // byte-identical after every pixel.
  Bytes serialize_state() const;

 private:
  struct StagePlan {
    const ColorHistogram* merged = nullptr;
    ColorHistogram merged_storage;
  };

  void plan_stage1(const ContextPattern& ctx);
  void apply_updates(const ContextPattern& ctx, Rgb actual, CodingStage stage,
                     RgbImage& canvas, uint32_t x, uint32_t y);

  PatternStore store_;
  StagePlan plan_;
  GlobalPalette palette_;
  ErrorHistograms errors_;
  FrequencyTable scratch_table_;
  std::vector<size_t> scratch_excluded_;
  std::vector<uint32_t> scratch_saved_;
};

// Encodes the SCF layer of `image`: a raster scan coding only pixels inside
// SCF-labeled CTUs, with the canvas pre-filled from the decoded base layer.
// The payload starts with the 3-bit palette-prefix field b (coded as one
// uniform 8-ary symbol) followed by the pixel symbol stream.
Bytes scf_encode_layer(const RgbImage& image, const SegmentationMask& mask,
                       const RgbImage& base_recon,
                       std::vector<PixelOutcome>* trace = nullptr);

RgbImage scf_decode_layer(const Bytes& payload, const SegmentationMask& mask,
                          const RgbImage& base_recon);

// Exact rate in bits of coding the block standalone (all-SCF mask over a
// black canvas), as used for oracle labeling.
uint64_t estimate_scf_rate(const RgbImage& block);

}  // namespace scf

#endif  // SCF_SCF_CODEC_HPP
