#include <benchmark/benchmark.h>

#include "masspcf/masspcf.hpp"

namespace {

void BM_Pdist(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<double>(static_cast<std::size_t>(state.range(0)), mpcf::RngSpec{3});
  const mpcf::PairwiseOptions options{static_cast<unsigned>(state.range(1)), 0, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpcf::pdist(fs, 1.0, options));
  }
  const double pairs = static_cast<double>(fs.size()) * static_cast<double>(fs.size() - 1) / 2.0;
  state.counters["pairs/s"] = benchmark::Counter(pairs, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Pdist)->Args({100, 1})->Args({250, 1})->Args({250, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_L2Kernel(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<float>(static_cast<std::size_t>(state.range(0)), mpcf::RngSpec{4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpcf::l2_kernel(fs));
  }
}
BENCHMARK(BM_L2Kernel)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace
