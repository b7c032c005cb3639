#include "frameforge/expframe_line.hpp"
#include "frameforge/frame_select.hpp"
#include "frameforge/lca_finite.hpp"
#include "frameforge/random.hpp"
#include "frameforge/sparsifier.hpp"

#include <benchmark/benchmark.h>

using namespace frameforge;

static void BM_BssSparsify(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FrameFamily frame(random_parseval_frame(8 * n, n, 23));
  for (auto _ : state) benchmark::DoNotOptimize(bss_sparsify(frame, 2.0));
}
BENCHMARK(BM_BssSparsify)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMicrosecond);

static void BM_Quantize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const WeightedFrame w = bss_sparsify(FrameFamily(random_parseval_frame(8 * n, n, 24)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(quantize_weights(w, 0.5));
}
BENCHMARK(BM_Quantize)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMicrosecond);

static void BM_Synthesize(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const GridSpectrum g{static_cast<std::int64_t>(m), random_subset(m, m / 4, 25)};
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(g, 1.0));
}
BENCHMARK(BM_Synthesize)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

static void BM_FrameSumConverged(benchmark::State& state) {
  const GridSpectrum g{64, random_subset(64, 16, 26)};
  const Synthesis s = synthesize(g, 1.0);
  const auto c = random_unit_vector(16, 27);
  for (auto _ : state) benchmark::DoNotOptimize(frame_sum_converged(g, s.sampling, c));
}
BENCHMARK(BM_FrameSumConverged)->Unit(benchmark::kMicrosecond);

static void BM_LiftFrame(benchmark::State& state) {
  const LiftCase c = random_lift_case(28, 64);
  for (auto _ : state) benchmark::DoNotOptimize(lift_frame(c.k, c.q_points, c.gammas));
}
BENCHMARK(BM_LiftFrame)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
