#include <benchmark/benchmark.h>

#include <limits>

#include "masspcf/masspcf.hpp"

namespace {

void BM_IterateRectangles(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<double>(64, mpcf::RngSpec{1});
  std::size_t cells = 0;
  for (auto _ : state) {
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
      mpcf::iterate_rectangles(fs[i], fs[i + 1], 0.0, std::numeric_limits<double>::infinity(),
                               [&](const mpcf::Rectangle<double>& r) {
                                 benchmark::DoNotOptimize(r);
                                 ++cells;
                               });
    }
  }
  state.counters["cells/s"] = benchmark::Counter(static_cast<double>(cells), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_IterateRectangles);

void BM_LpDistance(benchmark::State& state) {
  const auto fs = mpcf::synthetic_benchmark<double>(2, mpcf::RngSpec{2});
  const double p = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpcf::lp_distance(fs[0], fs[1], p));
  }
}
BENCHMARK(BM_LpDistance)->Arg(1)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
