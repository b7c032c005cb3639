#include "frameforge/expframe_line.hpp"
#include "frameforge/numerics.hpp"
#include "frameforge/random.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace frameforge;

static void BM_JacobiEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const HermitianMatrix a = random_hermitian(n, 17);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JacobiEigenvalues)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_JacobiEigenvectors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const HermitianMatrix a = random_hermitian(n, 18);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(a));
}
BENCHMARK(BM_JacobiEigenvectors)->RangeMultiplier(2)->Range(4, 64);

static void BM_SingularValues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix m = random_gaussian(4 * n, n, 19);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(m));
}
BENCHMARK(BM_SingularValues)->RangeMultiplier(2)->Range(4, 32);

// Builds the full DFT matrix; the largest size is 4096 x 4096.
static void BM_DftMatrix(benchmark::State& state) {
  const auto m = state.range(0);
  std::vector<std::size_t> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(dft_submatrix(m, all));
  state.SetItemsProcessed(state.iterations() * m * m);
}
BENCHMARK(BM_DftMatrix)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);
