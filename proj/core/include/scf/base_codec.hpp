#ifndef SCF_BASE_CODEC_HPP
#define SCF_BASE_CODEC_HPP

#include <cstdint>
#include <string>

#include "scf/image.hpp"

namespace scf {

// Pluggable lossy base-layer codec. Implementations must be deterministic,
// reconstruct entirely from the payload, and preserve image dimensions.
class BaseCodec {
 public:
  virtual ~BaseCodec() = default;
  virtual uint8_t id() const = 0;
  virtual std::string name() const = 0;
  virtual Bytes encode(const RgbImage& image, int quality_level) const = 0;
  virtual RgbImage decode(const Bytes& payload) const = 0;
};

// Deterministic stand-in for a real lossy codec: uniform channel
// quantization with step 2^((q-4)/6) followed by a predictive lossless pass
// (median-adaptive prediction over quantization indices, range-coded with
// adaptive per-channel histograms). Reconstruction error is at most half a
// step per channel.
class StubLossyCodec final : public BaseCodec {
 public:
  static constexpr uint8_t kId = 0;

  uint8_t id() const override { return kId; }
  std::string name() const override { return "stub"; }
  Bytes encode(const RgbImage& image, int quality_level) const override;
  RgbImage decode(const Bytes& payload) const override;

  // Quantization step for a quality level, rounded and floored at 1.
  static int quant_step(int quality_level);
};

// Registry keyed by the container's baseCodecId byte. Id 0 is the stub;
// other ids are reserved for external adapters. Throws ParseError for
// unknown ids.
const BaseCodec& base_codec_by_id(uint8_t id);

}  // namespace scf

#endif  // SCF_BASE_CODEC_HPP
