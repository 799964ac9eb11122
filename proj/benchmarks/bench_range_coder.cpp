#include <benchmark/benchmark.h>

#include "scf/range_coder.hpp"
#include "synth.hpp"

using namespace scf;

namespace {

std::vector<uint32_t> sample_stream(const FrequencyTable& table, size_t n,
                                    uint64_t seed) {
  synth::Rng rng(seed);
  std::vector<uint32_t> symbols(n);
  for (uint32_t& s : symbols)
    s = uint32_t(table.find(rng.next() % table.total()));
  return symbols;
}

FrequencyTable skewed_table(size_t alphabet) {
  FrequencyTable t;
  for (size_t i = 0; i < alphabet; ++i)
    t.push_back(uint32_t(1 + (alphabet - i) * (alphabet - i) / alphabet));
  return t;
}

void BM_EncodeSymbols(benchmark::State& state) {
  FrequencyTable table = skewed_table(size_t(state.range(0)));
  std::vector<uint32_t> symbols = sample_stream(table, 1 << 16, 7);
  for (auto _ : state) {
    RangeEncoder enc;
    for (uint32_t s : symbols) enc.encode_symbol(table, s);
    benchmark::DoNotOptimize(enc.finish());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * symbols.size());
}
BENCHMARK(BM_EncodeSymbols)->Arg(4)->Arg(64)->Arg(511);

void BM_DecodeSymbols(benchmark::State& state) {
  FrequencyTable table = skewed_table(size_t(state.range(0)));
  std::vector<uint32_t> symbols = sample_stream(table, 1 << 16, 7);
  RangeEncoder enc;
  for (uint32_t s : symbols) enc.encode_symbol(table, s);
  Bytes payload = enc.finish();
  for (auto _ : state) {
    RangeDecoder dec(payload);
    uint64_t sum = 0;
    for (size_t i = 0; i < symbols.size(); ++i) sum += dec.decode_symbol(table);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * symbols.size());
}
BENCHMARK(BM_DecodeSymbols)->Arg(4)->Arg(64)->Arg(511);

}  // namespace
