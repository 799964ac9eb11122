#include <benchmark/benchmark.h>

#include "scf/features.hpp"
#include "scf/scf_codec.hpp"
#include "synth.hpp"

using namespace scf;

namespace {

void BM_ScfEncodeBlock(benchmark::State& state) {
  auto kind = synth::Kind(state.range(0));
  RgbImage block = synth::make(kind, 128, 128, 42);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_scf_rate(block));
  state.SetItemsProcessed(int64_t(state.iterations()) * block.pixel_count());
}
BENCHMARK(BM_ScfEncodeBlock)
    ->Arg(int(synth::Kind::TextLike))
    ->Arg(int(synth::Kind::PaletteArt))
    ->Arg(int(synth::Kind::Gradient))
    ->Arg(int(synth::Kind::Noise));

void BM_ExtractFeatures(benchmark::State& state) {
  auto kind = synth::Kind(state.range(0));
  RgbImage block = synth::make(kind, 128, 128, 42);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(block));
  state.SetItemsProcessed(int64_t(state.iterations()) * block.pixel_count());
}
BENCHMARK(BM_ExtractFeatures)
    ->Arg(int(synth::Kind::TextLike))
    ->Arg(int(synth::Kind::Noise));

}  // namespace
