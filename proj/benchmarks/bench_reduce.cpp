#include <benchmark/benchmark.h>

#include "masspcf/masspcf.hpp"

namespace {

void BM_TreeReduceMax(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<double>(static_cast<std::size_t>(state.range(0)), mpcf::RngSpec{5});
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpcf::tree_reduce(fs, mpcf::Max{}, workers));
  }
}
BENCHMARK(BM_TreeReduceMax)->Args({256, 1})->Args({256, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Mean(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<double>(static_cast<std::size_t>(state.range(0)), mpcf::RngSpec{6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpcf::mean(fs));
  }
}
BENCHMARK(BM_Mean)->Arg(256)->Unit(benchmark::kMillisecond);

} // namespace
