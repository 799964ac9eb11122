#include <benchmark/benchmark.h>

#include "scf/container.hpp"
#include "scf/segmentation.hpp"
#include "synth.hpp"

using namespace scf;

namespace {

void BM_HybridEncode(benchmark::State& state) {
  RgbImage img = synth::make_mixed_screen(384, 256, 11);
  const BaseCodec& codec = base_codec_by_id(0);
  for (auto _ : state) {
    ContainerBitstream bits =
        encode_image(img, 27, oracle_labeler(codec, 27), codec);
    benchmark::DoNotOptimize(serialize(bits));
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * img.pixel_count());
}
BENCHMARK(BM_HybridEncode)->Unit(benchmark::kMillisecond);

void BM_HybridDecode(benchmark::State& state) {
  RgbImage img = synth::make_mixed_screen(384, 256, 11);
  const BaseCodec& codec = base_codec_by_id(0);
  Bytes bytes =
      serialize(encode_image(img, 27, oracle_labeler(codec, 27), codec));
  for (auto _ : state) benchmark::DoNotOptimize(decode_image(bytes));
  state.SetItemsProcessed(int64_t(state.iterations()) * img.pixel_count());
}
BENCHMARK(BM_HybridDecode)->Unit(benchmark::kMillisecond);

void BM_StubEncode(benchmark::State& state) {
  RgbImage img = synth::make_mixed_screen(384, 256, 11);
  const BaseCodec& codec = base_codec_by_id(0);
  for (auto _ : state) benchmark::DoNotOptimize(codec.encode(img, 27));
  state.SetItemsProcessed(int64_t(state.iterations()) * img.pixel_count());
}
BENCHMARK(BM_StubEncode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
