#ifndef SCF_CONTAINER_HPP
#define SCF_CONTAINER_HPP

#include <cstdint>
#include <functional>

#include "scf/base_codec.hpp"
#include "scf/ctu.hpp"
#include "scf/image.hpp"

namespace scf {

// Decides the layer of one CTU given its source pixels.
using CtuLabeler = std::function<CtuLabel(const RgbImage& block)>;

inline CtuLabeler fixed_labeler(CtuLabel label) {
  return [label](const RgbImage&) { return label; };
}

enum class ModeFlag : uint8_t { AllScf = 0, AllBase = 1, Mixed = 2 };

inline constexpr size_t kContainerHeaderBytes = 18;
inline constexpr size_t kContainerMaxPixels = 1u << 26;

struct ContainerHeader {
  uint8_t version = 1;
  ModeFlag mode = ModeFlag::AllBase;
  uint8_t quality_level = 0;
  uint8_t base_codec_id = 0;
  uint32_t width = 0;
  uint32_t height = 0;
  uint16_t ctu_size = uint16_t(kDefaultCtuSize);

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) =
      default;
};

// The hybrid file: header, CTU mask (mixed mode only, 1 bit per CTU), then
// the length-prefixed base and SCF payloads.
struct ContainerBitstream {
  ContainerHeader header;
  SegmentationMask mask;  // always populated; serialized only when Mixed
  Bytes base_payload;
  Bytes scf_payload;

  friend bool operator==(const ContainerBitstream&, const ContainerBitstream&) =
      default;
};

size_t mask_bytes(const CtuGrid& grid);

Bytes serialize(const ContainerBitstream& bits);
ContainerBitstream deserialize(const Bytes& bytes);

struct EncodeStats {
  ModeFlag mode = ModeFlag::AllBase;
  uint32_t total_ctus = 0;
  uint32_t scf_ctus = 0;
  double scf_pixel_fraction = 0.0;
  size_t container_bytes = 0;
  size_t base_bytes = 0;
  size_t scf_bytes = 0;
};

// Full encoding pipeline: label CTUs, black-fill SCF CTUs and run the base
// codec over the result, then code the SCF layer against the decoded base
// reconstruction.
ContainerBitstream encode_image(const RgbImage& image, int quality_level,
                                const CtuLabeler& labeler,
                                const BaseCodec& base_codec,
                                uint32_t ctu_size = kDefaultCtuSize,
                                EncodeStats* stats = nullptr);

// Decodes base layer, SCF layer and composes the reconstruction. The base
// codec comes from the registry via the header's codec id.
RgbImage decode_image(const ContainerBitstream& bits);

inline RgbImage decode_image(const Bytes& bytes) {
  return decode_image(deserialize(bytes));
}

}  // namespace scf

#endif  // SCF_CONTAINER_HPP
