#include <benchmark/benchmark.h>

#include "vsx/rng.hpp"
#include "vsx/simdiag.hpp"

using namespace vsx;

namespace {

Tensor3 random_cp(Index n1, Index n2, Index n3, int rank, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(n1, n2, n3);
  for (int a = 0; a < rank; ++a) {
    const Vector u = rng.vector(n1, Field::Complex);
    const Vector v = rng.vector(n2, Field::Complex);
    const Vector w = rng.vector(n3, Field::Complex);
    for (Index i = 0; i < n1; ++i) t.slices[static_cast<std::size_t>(i)] += u(i) * v * w.transpose();
  }
  return t;
}

void BM_SimDiagCube(benchmark::State& state) {
  const Index n = state.range(0);
  const Tensor3 t = random_cp(n, n, n, static_cast<int>(n - 1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(simultaneous_diagonalize(t, 0, {}));
}
BENCHMARK(BM_SimDiagCube)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

// the shape algorithm1 produces: few slices, wide third mode
void BM_SimDiagWide(benchmark::State& state) {
  const Index s = state.range(0);
  const Tensor3 t = random_cp(s, 25, 25 * 25, static_cast<int>(s), 2);
  for (auto _ : state) benchmark::DoNotOptimize(simultaneous_diagonalize(t, 0, {}));
}
BENCHMARK(BM_SimDiagWide)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
