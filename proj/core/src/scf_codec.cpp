#include "scf/scf_codec.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace scf {

namespace {

int byte_distance(const std::array<uint8_t, 18>& a,
                  const std::array<uint8_t, 18>& b, int limit) {
  int sum = 0;
  for (size_t pos = 0; pos < 6; ++pos) {
    int d = 0;
    for (size_t ch = 0; ch < 3; ++ch) {
      int diff = std::abs(int(a[3 * pos + ch]) - int(b[3 * pos + ch]));
      d = std::max(d, diff);
    }
    sum += d;
    if (sum > limit) return sum;
  }
  return sum;
}

uint8_t clamp_channel(int v) {
  return static_cast<uint8_t>(std::clamp(v, 0, 255));
}

}  // namespace

int pattern_distance(const ContextPattern& a, const ContextPattern& b) {
  return byte_distance(a.key_bytes(), b.key_bytes(), 6 * 255);
}

ContextPattern gather_context(const RgbImage& canvas, uint32_t x, uint32_t y) {
  // Template offsets in the order A,B,C,D,E,F.
  static constexpr int kOffsets[6][2] = {{-1, 0}, {0, -1}, {-1, -1},
                                         {1, -1}, {-2, 0}, {0, -2}};
  ContextPattern p;
  bool avail[6];
  int first_avail = -1;
  for (int i = 0; i < 6; ++i) {
    int64_t nx = static_cast<int64_t>(x) + kOffsets[i][0];
    int64_t ny = static_cast<int64_t>(y) + kOffsets[i][1];
    avail[i] = canvas.in_bounds(nx, ny);
    if (avail[i]) {
      p.values[i] = canvas.at(static_cast<uint32_t>(nx), static_cast<uint32_t>(ny));
      if (first_avail < 0) first_avail = i;
    }
  }
  Rgb substitute =
      first_avail >= 0 ? p.values[first_avail] : Rgb{128, 128, 128};
  for (int i = 0; i < 6; ++i)
    if (!avail[i]) p.values[i] = substitute;
  return p;
}

Rgb cmap_predict(const ContextPattern& p) {
  auto med = [](int a, int b, int c) -> uint8_t {
    int mx = std::max(a, b);
    int mn = std::min(a, b);
    if (c >= mx) return static_cast<uint8_t>(mn);
    if (c <= mn) return static_cast<uint8_t>(mx);
    return clamp_channel(a + b - c);
  };
  const Rgb a = p.values[0], b = p.values[1], c = p.values[2];
  return Rgb{med(a.r, b.r, c.r), med(a.g, b.g, c.g), med(a.b, b.b, c.b)};
}

// ---------------------------------------------------------------------------
// ColorHistogram

void ColorHistogram::add(uint32_t color, uint32_t count) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), color,
      [](const Entry& e, uint32_t c) { return e.color < c; });
  if (it != entries_.end() && it->color == color)
    it->count += count;
  else
    entries_.insert(it, Entry{color, count});
  total_ += count;
}

size_t ColorHistogram::index_of(uint32_t color) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), color,
      [](const Entry& e, uint32_t c) { return e.color < c; });
  if (it != entries_.end() && it->color == color)
    return static_cast<size_t>(it - entries_.begin());
  return npos;
}

void ColorHistogram::clear() {
  entries_.clear();
  total_ = 0;
}

// ---------------------------------------------------------------------------
// PatternStore

const ColorHistogram* PatternStore::exact(const ContextPattern& p) const {
  auto it = exact_.find(p.key_bytes());
  return it == exact_.end() ? nullptr : &patterns_[it->second].hist;
}

void PatternStore::merge_within(const ContextPattern& p, int tolerance,
                                ColorHistogram& out) const {
  const auto key = p.key_bytes();
  const Rgb a = p.values[0];
  // Any pattern within `tolerance` has its A position within per-channel
  // distance `tolerance`, so scanning the overlapping quantized cells of A
  // covers all candidates.
  uint32_t rlo = uint32_t(std::max(0, int(a.r) - tolerance)) >> 5;
  uint32_t rhi = uint32_t(std::min(255, int(a.r) + tolerance)) >> 5;
  uint32_t glo = uint32_t(std::max(0, int(a.g) - tolerance)) >> 5;
  uint32_t ghi = uint32_t(std::min(255, int(a.g) + tolerance)) >> 5;
  uint32_t blo = uint32_t(std::max(0, int(a.b) - tolerance)) >> 5;
  uint32_t bhi = uint32_t(std::min(255, int(a.b) + tolerance)) >> 5;
  for (uint32_t rc = rlo; rc <= rhi; ++rc)
    for (uint32_t gc = glo; gc <= ghi; ++gc)
      for (uint32_t bc = blo; bc <= bhi; ++bc) {
        auto it = cells_.find(rc << 10 | gc << 5 | bc);
        if (it == cells_.end()) continue;
        for (uint32_t idx : it->second) {
          const Stored& s = patterns_[idx];
          if (byte_distance(key, s.key, tolerance) > tolerance) continue;
          for (const ColorHistogram::Entry& e : s.hist.entries())
            out.add(e.color, e.count);
        }
      }
}

void PatternStore::record(const ContextPattern& p, Rgb color) {
  const auto key = p.key_bytes();
  auto [it, inserted] = exact_.try_emplace(key, uint32_t(patterns_.size()));
  if (inserted) {
    patterns_.push_back(Stored{key, {}});
    cells_[cell_key(p.values[0])].push_back(it->second);
  }
  patterns_[it->second].hist.add(pack_rgb(color), 1);
}

void PatternStore::serialize(Bytes& out) const {
  put_u32be(out, uint32_t(patterns_.size()));
  for (const Stored& s : patterns_) {
    out.insert(out.end(), s.key.begin(), s.key.end());
    put_u32be(out, uint32_t(s.hist.distinct()));
    for (const ColorHistogram::Entry& e : s.hist.entries()) {
      put_u32be(out, e.color);
      put_u32be(out, e.count);
    }
  }
}

// ---------------------------------------------------------------------------
// GlobalPalette

size_t GlobalPalette::slot_of(uint32_t color) const {
  auto it = slots_.find(color);
  return it == slots_.end() ? npos : it->second;
}

void GlobalPalette::fenwick_add(size_t slot, int64_t delta) {
  for (size_t i = slot + 1; i < tree_.size(); i += i & (0 - i))
    tree_[i] += static_cast<uint64_t>(delta);
}

uint64_t GlobalPalette::cumulative(size_t slot) const {
  uint64_t sum = 0;
  for (size_t i = slot; i > 0; i -= i & (0 - i)) sum += tree_[i];
  return sum;
}

size_t GlobalPalette::find(uint64_t target) const {
  size_t pos = 0;
  size_t n = entries_.size();
  for (size_t bit = std::bit_floor(n); bit != 0; bit >>= 1) {
    size_t next = pos + bit;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  if (pos >= n) throw StreamError("palette lookup out of range");
  return pos;
}

void GlobalPalette::add_new(uint32_t color, uint32_t count) {
  size_t slot = entries_.size();
  entries_.push_back(Entry{color, count});
  slots_.emplace(color, uint32_t(slot));
  // Append a Fenwick node covering (slot+1-lowbit, slot+1].
  size_t i = slot + 1;
  size_t lowbit = i & (0 - i);
  uint64_t node = count;
  if (lowbit > 1) node += cumulative(slot) - cumulative(slot + 1 - lowbit);
  tree_.resize(i + 1);
  tree_[i] = node;
  total_ += count;
  apply_cap();
}

void GlobalPalette::bump(size_t slot) {
  entries_[slot].count += 1;
  fenwick_add(slot, 1);
  total_ += 1;
  apply_cap();
}

void GlobalPalette::apply_cap() {
  // Counts floor at 1, so palettes with more than kFrequencyCap colors
  // settle at the all-ones fixed point instead of halving forever.
  while (total_ > kFrequencyCap && total_ > entries_.size()) {
    total_ = 0;
    for (Entry& e : entries_) {
      e.count = (e.count + 1) / 2;
      total_ += e.count;
    }
    // Rebuild the tree from the halved counts.
    std::fill(tree_.begin(), tree_.end(), 0);
    for (size_t s = 0; s < entries_.size(); ++s)
      fenwick_add(s, entries_[s].count);
  }
}

uint32_t GlobalPalette::exclude(size_t slot) {
  uint32_t c = entries_[slot].count;
  if (c == 0) return 0;
  entries_[slot].count = 0;
  fenwick_add(slot, -int64_t(c));
  total_ -= c;
  return c;
}

void GlobalPalette::restore(size_t slot, uint32_t count) {
  if (count == 0) return;
  entries_[slot].count = count;
  fenwick_add(slot, int64_t(count));
  total_ += count;
}

void GlobalPalette::serialize(Bytes& out) const {
  put_u32be(out, uint32_t(entries_.size()));
  for (const Entry& e : entries_) {
    put_u32be(out, e.color);
    put_u32be(out, e.count);
  }
}

void ErrorHistograms::serialize(Bytes& out) const {
  for (const FrequencyTable& t : channel)
    for (uint32_t c : t.counts()) put_u32be(out, c);
}

// ---------------------------------------------------------------------------
// Stage tables

Stage1Table stage1_distribution(const ColorHistogram& merged) {
  Stage1Table t;
  if (merged.empty()) return t;
  t.colors.reserve(merged.distinct());
  for (const ColorHistogram::Entry& e : merged.entries()) {
    t.colors.push_back(e.color);
    t.table.push_back(e.count);
  }
  t.table.push_back(uint32_t(merged.distinct()));  // escape
  return t;
}

Stage2Table stage2_distribution(const GlobalPalette& palette,
                                const std::vector<uint32_t>& excluded_colors) {
  Stage2Table t;
  if (palette.size() == 0) return t;  // skip sentinel
  for (const GlobalPalette::Entry& e : palette.entries()) {
    if (std::find(excluded_colors.begin(), excluded_colors.end(), e.color) !=
        excluded_colors.end())
      continue;
    t.colors.push_back(e.color);
    t.table.push_back(e.count);
  }
  t.table.push_back(std::max<uint32_t>(1, uint32_t(t.colors.size())));
  return t;
}

// ---------------------------------------------------------------------------
// Palette prefix selection

PalettePrefixChoice palette_prefix(
    const std::vector<GlobalPalette::Entry>& base_palette, int b) {
  PalettePrefixChoice choice;
  choice.b = b;
  if (b >= 7 || b < 0) {
    choice.b = 7;
    return choice;
  }
  size_t len = base_palette.size() >> b;
  choice.prefix.assign(base_palette.begin(), base_palette.begin() + len);
  return choice;
}

PalettePrefixChoice select_palette_prefix(
    const std::unordered_set<uint32_t>& scf_layer_colors,
    const std::vector<GlobalPalette::Entry>& base_palette) {
  int best_b = -1;
  uint64_t best_num = 0, best_den = 1;  // score as exact rational num/den
  for (int b = 0; b <= 6; ++b) {
    uint64_t len = base_palette.size() >> b;
    if (len == 0) continue;  // empty prefix scores 0
    uint64_t hits = 0;
    for (size_t i = 0; i < len; ++i)
      if (scf_layer_colors.count(base_palette[i].color)) ++hits;
    if (hits * best_den > best_num * len) {  // strict: smallest b wins ties
      best_b = b;
      best_num = hits;
      best_den = len;
    }
  }
  if (best_b < 0 || 10 * best_num < 9 * best_den) return palette_prefix(base_palette, 7);
  return palette_prefix(base_palette, best_b);
}

GlobalPalette init_palette(const PalettePrefixChoice& choice,
                           uint32_t ctu_width) {
  if (ctu_width == 0) throw Error("init_palette: zero block width");
  GlobalPalette p;
  for (const GlobalPalette::Entry& e : choice.prefix) {
    uint64_t scaled = (2ull * e.count + ctu_width) / (2ull * ctu_width);
    p.add_new(e.color, uint32_t(std::max<uint64_t>(1, scaled)));
  }
  return p;
}

std::vector<GlobalPalette::Entry> base_layer_palette(
    const RgbImage& base_recon, const SegmentationMask& mask) {
  std::unordered_map<uint32_t, uint32_t> counts;
  for (uint32_t y = 0; y < base_recon.height(); ++y)
    for (uint32_t x = 0; x < base_recon.width(); ++x)
      if (mask.at_pixel(x, y) == CtuLabel::Base)
        ++counts[pack_rgb(base_recon.at(x, y))];
  std::vector<GlobalPalette::Entry> palette;
  palette.reserve(counts.size());
  for (auto [color, count] : counts) palette.push_back({color, count});
  std::sort(palette.begin(), palette.end(),
            [](const GlobalPalette::Entry& a, const GlobalPalette::Entry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.color < b.color;
            });
  return palette;
}

// ---------------------------------------------------------------------------
// Pixel cascade

void ScfContextModel::plan_stage1(const ContextPattern& ctx) {
  plan_.merged = nullptr;
  if (const ColorHistogram* hist = store_.exact(ctx)) {
    plan_.merged = hist;
    return;
  }
  plan_.merged_storage.clear();
  store_.merge_within(ctx, kEscalationTolerance, plan_.merged_storage);
  if (!plan_.merged_storage.empty()) plan_.merged = &plan_.merged_storage;
}

PixelOutcome ScfContextModel::encode_pixel(RangeEncoder& enc, RgbImage& canvas,
                                           uint32_t x, uint32_t y, Rgb actual) {
  ContextPattern ctx = gather_context(canvas, x, y);
  plan_stage1(ctx);
  const StagePlan& plan = plan_;

  PixelOutcome out{x, y, CodingStage::Stage3, plan.merged != nullptr, false};
  const uint32_t packed = pack_rgb(actual);
  bool coded = false;
  bool stage1_escaped = false;

  if (plan.merged) {
    const ColorHistogram& m = *plan.merged;
    scratch_table_.clear();
    for (const ColorHistogram::Entry& e : m.entries())
      scratch_table_.push_back(e.count);
    scratch_table_.push_back(uint32_t(m.distinct()));  // escape
    size_t idx = m.index_of(packed);
    if (idx != ColorHistogram::npos) {
      enc.encode_symbol(scratch_table_, idx);
      out.stage = CodingStage::Stage1;
      out.color_in_merged = true;
      coded = true;
    } else {
      enc.encode_symbol(scratch_table_, m.distinct());
      stage1_escaped = true;
    }
  }

  if (!coded && palette_.size() > 0) {
    scratch_excluded_.clear();
    scratch_saved_.clear();
    if (stage1_escaped)
      for (const ColorHistogram::Entry& e : plan.merged->entries()) {
        size_t slot = palette_.slot_of(e.color);
        if (slot != GlobalPalette::npos) {
          scratch_excluded_.push_back(slot);
          scratch_saved_.push_back(palette_.exclude(slot));
        }
      }
    size_t included = palette_.size() - scratch_excluded_.size();
    uint64_t esc_w = included == 0 ? 1 : uint64_t(included);
    uint64_t tot_incl = palette_.total();
    uint64_t grand = tot_incl + esc_w;
    size_t slot = palette_.slot_of(packed);
    if (slot != GlobalPalette::npos && palette_.count_at(slot) > 0) {
      enc.encode(palette_.cumulative(slot), palette_.count_at(slot), grand);
      out.stage = CodingStage::Stage2;
      coded = true;
    } else {
      enc.encode(tot_incl, esc_w, grand);
    }
    for (size_t i = scratch_excluded_.size(); i-- > 0;)
      palette_.restore(scratch_excluded_[i], scratch_saved_[i]);
  }

  if (!coded) {
    out.stage = CodingStage::Stage3;
    Rgb pred = cmap_predict(ctx);
    const int actual_ch[3] = {actual.r, actual.g, actual.b};
    const int pred_ch[3] = {pred.r, pred.g, pred.b};
    for (int ch = 0; ch < 3; ++ch) {
      size_t bin = size_t(actual_ch[ch] - pred_ch[ch] + 255);
      enc.encode_symbol(errors_.channel[ch], bin);
      errors_.channel[ch].add_capped(bin, 1);
    }
  }

  apply_updates(ctx, actual, out.stage, canvas, x, y);
  return out;
}

std::pair<Rgb, PixelOutcome> ScfContextModel::decode_pixel(RangeDecoder& dec,
                                                           RgbImage& canvas,
                                                           uint32_t x,
                                                           uint32_t y) {
  ContextPattern ctx = gather_context(canvas, x, y);
  plan_stage1(ctx);
  const StagePlan& plan = plan_;

  PixelOutcome out{x, y, CodingStage::Stage3, plan.merged != nullptr, false};
  Rgb color{};
  bool coded = false;
  bool stage1_escaped = false;

  if (plan.merged) {
    const ColorHistogram& m = *plan.merged;
    scratch_table_.clear();
    for (const ColorHistogram::Entry& e : m.entries())
      scratch_table_.push_back(e.count);
    scratch_table_.push_back(uint32_t(m.distinct()));
    size_t sym = dec.decode_symbol(scratch_table_);
    if (sym < m.distinct()) {
      color = unpack_rgb(m.entries()[sym].color);
      out.stage = CodingStage::Stage1;
      out.color_in_merged = true;
      coded = true;
    } else {
      stage1_escaped = true;
    }
  }

  if (!coded && palette_.size() > 0) {
    scratch_excluded_.clear();
    scratch_saved_.clear();
    if (stage1_escaped)
      for (const ColorHistogram::Entry& e : plan.merged->entries()) {
        size_t slot = palette_.slot_of(e.color);
        if (slot != GlobalPalette::npos) {
          scratch_excluded_.push_back(slot);
          scratch_saved_.push_back(palette_.exclude(slot));
        }
      }
    size_t included = palette_.size() - scratch_excluded_.size();
    uint64_t esc_w = included == 0 ? 1 : uint64_t(included);
    uint64_t tot_incl = palette_.total();
    uint64_t grand = tot_incl + esc_w;
    uint64_t target = dec.decode_target(grand);
    if (target < tot_incl) {
      size_t slot = palette_.find(target);
      dec.decode_update(palette_.cumulative(slot), palette_.count_at(slot));
      color = unpack_rgb(palette_.color_at(slot));
      out.stage = CodingStage::Stage2;
      coded = true;
    } else {
      dec.decode_update(tot_incl, esc_w);
    }
    for (size_t i = scratch_excluded_.size(); i-- > 0;)
      palette_.restore(scratch_excluded_[i], scratch_saved_[i]);
  }

  if (!coded) {
    out.stage = CodingStage::Stage3;
    Rgb pred = cmap_predict(ctx);
    const int pred_ch[3] = {pred.r, pred.g, pred.b};
    uint8_t v[3];
    for (int ch = 0; ch < 3; ++ch) {
      size_t bin = dec.decode_symbol(errors_.channel[ch]);
      errors_.channel[ch].add_capped(bin, 1);
      v[ch] = clamp_channel(pred_ch[ch] + int(bin) - 255);
    }
    color = Rgb{v[0], v[1], v[2]};
  }

  apply_updates(ctx, color, out.stage, canvas, x, y);
  return {color, out};
}

void ScfContextModel::apply_updates(const ContextPattern& ctx, Rgb actual,
                                    CodingStage stage, RgbImage& canvas,
                                    uint32_t x, uint32_t y) {
  store_.record(ctx, actual);
  if (stage != CodingStage::Stage1) {
    uint32_t packed = pack_rgb(actual);
    size_t slot = palette_.slot_of(packed);
    if (slot == GlobalPalette::npos)
      palette_.add_new(packed, 1);
    else
      palette_.bump(slot);
  }
  canvas.at(x, y) = actual;
}

Bytes ScfContextModel::serialize_state() const {
  Bytes out;
  store_.serialize(out);
  palette_.serialize(out);
  errors_.serialize(out);
  return out;
}

// ---------------------------------------------------------------------------
// Layer coding

namespace {

void check_layer_args(const RgbImage& image, const SegmentationMask& mask,
                      const RgbImage& base_recon) {
  if (image.width() != base_recon.width() ||
      image.height() != base_recon.height())
    throw ParseError("scf layer: image and base reconstruction sizes differ");
  CtuGrid expected(image.width(), image.height(), mask.grid.ctu_size);
  if (!(mask.grid == expected) || mask.labels.size() != mask.grid.count())
    throw ParseError("scf layer: mask grid does not match image");
}

}  // namespace

Bytes scf_encode_layer(const RgbImage& image, const SegmentationMask& mask,
                       const RgbImage& base_recon,
                       std::vector<PixelOutcome>* trace) {
  check_layer_args(image, mask, base_recon);

  std::unordered_set<uint32_t> scf_colors;
  for (uint32_t y = 0; y < image.height(); ++y)
    for (uint32_t x = 0; x < image.width(); ++x)
      if (mask.at_pixel(x, y) == CtuLabel::Scf)
        scf_colors.insert(pack_rgb(image.at(x, y)));

  auto base_palette = base_layer_palette(base_recon, mask);
  PalettePrefixChoice choice = select_palette_prefix(scf_colors, base_palette);

  ScfContextModel model(init_palette(choice, mask.grid.ctu_size));
  RgbImage canvas = base_recon;
  RangeEncoder enc;
  enc.encode(uint64_t(choice.b), 1, 8);  // 3-bit prefix field
  for (uint32_t y = 0; y < image.height(); ++y)
    for (uint32_t x = 0; x < image.width(); ++x) {
      if (mask.at_pixel(x, y) != CtuLabel::Scf) continue;
      PixelOutcome o = model.encode_pixel(enc, canvas, x, y, image.at(x, y));
      if (trace) trace->push_back(o);
    }
  return enc.finish();
}

RgbImage scf_decode_layer(const Bytes& payload, const SegmentationMask& mask,
                          const RgbImage& base_recon) {
  check_layer_args(base_recon, mask, base_recon);
  RangeDecoder dec(payload);
  uint64_t b = dec.decode_target(8);
  dec.decode_update(b, 1);

  auto base_palette = base_layer_palette(base_recon, mask);
  PalettePrefixChoice choice = palette_prefix(base_palette, int(b));

  ScfContextModel model(init_palette(choice, mask.grid.ctu_size));
  RgbImage canvas = base_recon;
  for (uint32_t y = 0; y < canvas.height(); ++y)
    for (uint32_t x = 0; x < canvas.width(); ++x) {
      if (mask.at_pixel(x, y) != CtuLabel::Scf) continue;
      model.decode_pixel(dec, canvas, x, y);
    }
  return canvas;
}

uint64_t estimate_scf_rate(const RgbImage& block) {
  SegmentationMask all_scf(
      CtuGrid(block.width(), block.height(), kDefaultCtuSize), CtuLabel::Scf);
  RgbImage black(block.width(), block.height(), Rgb{0, 0, 0});
  return uint64_t(scf_encode_layer(block, all_scf, black).size()) * 8;
}

}  // namespace scf
