#include <benchmark/benchmark.h>

#include "sudlerlab/reference.hpp"
#include "sudlerlab/sudler_eval.hpp"

using namespace sudlerlab;

namespace {

const auto kGolden = log_source(IrrationalTarget{QuadraticIrrational(1, {}, {1})});
const auto kFraction = log_source(SmallFraction{514229, 832040});

void BM_ReferencePrefix(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::prefix_values(kGolden, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ChunkedPrefix(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const ScanConfig cfg{std::uint64_t{1} << 16, static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(prefix_values(kGolden, n, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ReferenceSummary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::summarize(kFraction, 832039, {2.0}));
  state.SetItemsProcessed(state.iterations() * 832039);
}

void BM_ChunkedSummary(benchmark::State& state) {
  const ScanConfig cfg{std::uint64_t{1} << 16, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(summarize(kFraction, 832039, {2.0}, cfg));
  state.SetItemsProcessed(state.iterations() * 832039);
}

}  // namespace

BENCHMARK(BM_ReferencePrefix)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChunkedPrefix)->Args({1 << 20, 1})->Args({1 << 20, 2})->Args({1 << 20, 4})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReferenceSummary)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChunkedSummary)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
