#include "scf/container.hpp"

#include <cstring>

#include "scf/scf_codec.hpp"

namespace scf {

namespace {
constexpr char kMagic[4] = {'S', 'C', 'F', 'H'};
constexpr uint8_t kVersion = 1;
}  // namespace

size_t mask_bytes(const CtuGrid& grid) { return (grid.count() + 7) / 8; }

Bytes serialize(const ContainerBitstream& bits) {
  const ContainerHeader& h = bits.header;
  Bytes out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(h.version);
  out.push_back(uint8_t(uint8_t(h.mode) << 6));  // low 6 bits reserved
  out.push_back(h.quality_level);
  out.push_back(h.base_codec_id);
  put_u32be(out, h.width);
  put_u32be(out, h.height);
  put_u16be(out, h.ctu_size);

  if (h.mode == ModeFlag::Mixed) {
    size_t n = bits.mask.labels.size();
    Bytes mask(mask_bytes(bits.mask.grid), 0);
    for (size_t i = 0; i < n; ++i)
      if (bits.mask.labels[i] == CtuLabel::Scf)
        mask[i / 8] |= uint8_t(0x80u >> (i % 8));
    out.insert(out.end(), mask.begin(), mask.end());
  }

  put_u32be(out, uint32_t(bits.base_payload.size()));
  out.insert(out.end(), bits.base_payload.begin(), bits.base_payload.end());
  put_u32be(out, uint32_t(bits.scf_payload.size()));
  out.insert(out.end(), bits.scf_payload.begin(), bits.scf_payload.end());
  return out;
}

ContainerBitstream deserialize(const Bytes& bytes) {
  ByteReader r(bytes);
  const uint8_t* magic = r.bytes(4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError("not an SCFH container (bad magic)");

  ContainerBitstream bits;
  ContainerHeader& h = bits.header;
  h.version = r.u8("version");
  if (h.version != kVersion)
    throw ParseError("unsupported container version " +
                     std::to_string(h.version));
  uint8_t flags = r.u8("flags");
  if ((flags & 0x3F) != 0) throw ParseError("reserved flag bits set");
  uint8_t mode = flags >> 6;
  if (mode > 2) throw ParseError("invalid mode flag");
  h.mode = ModeFlag(mode);
  h.quality_level = r.u8("quality level");
  h.base_codec_id = r.u8("base codec id");
  h.width = r.u32be("width");
  h.height = r.u32be("height");
  h.ctu_size = r.u16be("ctu size");
  if (h.width == 0 || h.height == 0) throw ParseError("zero image dimension");
  if (uint64_t(h.width) * h.height > kContainerMaxPixels)
    throw ParseError("image too large for decoder");
  if (h.ctu_size == 0) throw ParseError("zero CTU size");

  CtuGrid grid(h.width, h.height, h.ctu_size);
  if (h.mode == ModeFlag::Mixed) {
    bits.mask = SegmentationMask(grid, CtuLabel::Base);
    const uint8_t* mask = r.bytes(mask_bytes(grid), "ctu mask");
    for (size_t i = 0; i < grid.count(); ++i)
      if (mask[i / 8] & (0x80u >> (i % 8))) bits.mask.labels[i] = CtuLabel::Scf;
  } else {
    bits.mask = SegmentationMask(
        grid, h.mode == ModeFlag::AllScf ? CtuLabel::Scf : CtuLabel::Base);
  }

  uint32_t base_len = r.u32be("base payload length");
  const uint8_t* base = r.bytes(base_len, "base payload");
  bits.base_payload.assign(base, base + base_len);
  uint32_t scf_len = r.u32be("scf payload length");
  const uint8_t* scf = r.bytes(scf_len, "scf payload");
  bits.scf_payload.assign(scf, scf + scf_len);
  if (r.remaining() != 0)
    throw ParseError("trailing bytes after container payload");

  if (h.mode == ModeFlag::AllScf && base_len != 0)
    throw ParseError("all-SCF container carries a base payload");
  if (h.mode == ModeFlag::AllBase && scf_len != 0)
    throw ParseError("all-base container carries an SCF payload");
  return bits;
}

ContainerBitstream encode_image(const RgbImage& image, int quality_level,
                                const CtuLabeler& labeler,
                                const BaseCodec& base_codec, uint32_t ctu_size,
                                EncodeStats* stats) {
  if (image.empty()) throw Error("encode_image: empty image");
  if (image.pixel_count() > kContainerMaxPixels)
    throw Error("encode_image: image too large");
  if (quality_level < 0 || quality_level > 255)
    throw Error("encode_image: quality level out of range");
  if (ctu_size == 0 || ctu_size > 0xFFFF)
    throw Error("encode_image: bad CTU size");

  CtuGrid grid(image.width(), image.height(), ctu_size);
  SegmentationMask mask(grid, CtuLabel::Base);
  for (const CtuRect& rect : split_into_ctus(image, ctu_size))
    mask.labels[rect.index] = labeler(crop(image, rect));

  ContainerBitstream bits;
  bits.header.version = kVersion;
  bits.header.quality_level = uint8_t(quality_level);
  bits.header.base_codec_id = base_codec.id();
  bits.header.width = image.width();
  bits.header.height = image.height();
  bits.header.ctu_size = uint16_t(ctu_size);
  bits.mask = mask;
  bits.header.mode = mask.all_scf()    ? ModeFlag::AllScf
                     : mask.all_base() ? ModeFlag::AllBase
                                       : ModeFlag::Mixed;

  RgbImage base_recon(image.width(), image.height(), Rgb{0, 0, 0});
  if (bits.header.mode != ModeFlag::AllScf) {
    LayerImage base_input = blacken(image, mask);
    bits.base_payload = base_codec.encode(base_input.image, quality_level);
    base_recon = base_codec.decode(bits.base_payload);
    if (base_recon.width() != image.width() ||
        base_recon.height() != image.height())
      throw Error("base codec changed image dimensions");
  }

  if (bits.header.mode != ModeFlag::AllBase)
    bits.scf_payload = scf_encode_layer(image, mask, base_recon);

  if (stats) {
    stats->mode = bits.header.mode;
    stats->total_ctus = grid.count();
    stats->scf_ctus = mask.count_scf();
    stats->scf_pixel_fraction =
        scf_pixel_fraction(mask, image.width(), image.height());
    stats->base_bytes = bits.base_payload.size();
    stats->scf_bytes = bits.scf_payload.size();
    stats->container_bytes = kContainerHeaderBytes + 8 +
                             (bits.header.mode == ModeFlag::Mixed
                                  ? mask_bytes(grid)
                                  : 0) +
                             stats->base_bytes + stats->scf_bytes;
  }
  return bits;
}

RgbImage decode_image(const ContainerBitstream& bits) {
  const ContainerHeader& h = bits.header;
  const BaseCodec& codec = base_codec_by_id(h.base_codec_id);

  RgbImage base_recon(h.width, h.height, Rgb{0, 0, 0});
  if (!bits.base_payload.empty()) {
    base_recon = codec.decode(bits.base_payload);
    if (base_recon.width() != h.width || base_recon.height() != h.height)
      throw ParseError("base payload dimensions disagree with container");
  } else if (h.mode != ModeFlag::AllScf) {
    throw ParseError("missing base payload");
  }

  if (h.mode == ModeFlag::AllBase) return base_recon;

  RgbImage scf_canvas = scf_decode_layer(bits.scf_payload, bits.mask, base_recon);
  return compose_layers(base_recon, scf_canvas, bits.mask);
}

}  // namespace scf
