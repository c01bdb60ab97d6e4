#include <benchmark/benchmark.h>

#include "vsx/decompose.hpp"
#include "vsx/harness.hpp"
#include "vsx/intersect.hpp"
#include "vsx/rng.hpp"

using namespace vsx;

namespace {

void BM_Algorithm1RankOne(benchmark::State& state) {
  const Index n = state.range(0);
  const VarietySpec spec{Determinantal{n, n, 1}};
  const PolySystem sys = generators(spec).front();
  const Index r = (n - 1) * (n - 1) / 4;
  const auto inst = gen_planted(spec, r, state.range(1), 3);
  for (auto _ : state) benchmark::DoNotOptimize(algorithm1(inst.u, sys, 0, {}));
  state.SetLabel("R=" + std::to_string(r));
}
BENCHMARK(BM_Algorithm1RankOne)->Args({5, 0})->Args({5, 4})->Args({7, 9})->Args({9, 16})->Unit(benchmark::kMillisecond);

void BM_Tensor3AtBound(benchmark::State& state) {
  const Index n = state.range(0);
  const Index r = (n - 1) * (n - 1) / 4;
  Rng rng(5);
  DenseTensor t{{n, n, r}, Vector::Zero(n * n * r), Field::Complex};
  for (Index a = 0; a < r; ++a) {
    const Vector x = rng.vector(n, Field::Complex);
    const Vector y = rng.vector(n, Field::Complex);
    const Vector z = rng.vector(r, Field::Complex);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) t.entries.segment((i * n + j) * r, r) += x(i) * y(j) * z;
  }
  for (auto _ : state) benchmark::DoNotOptimize(tensor3_decompose(t, 0, {}));
}
BENCHMARK(BM_Tensor3AtBound)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
