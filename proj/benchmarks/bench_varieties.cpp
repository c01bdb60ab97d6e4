#include <benchmark/benchmark.h>

#include "vsx/rng.hpp"
#include "vsx/varieties.hpp"

using namespace vsx;

namespace {

void BM_GeneratorsDeterminantal(benchmark::State& state) {
  const Index n = state.range(0);
  const VarietySpec spec{Determinantal{n, n, state.range(1)}};
  for (auto _ : state) benchmark::DoNotOptimize(generators(spec));
}
BENCHMARK(BM_GeneratorsDeterminantal)->Args({5, 1})->Args({8, 1})->Args({6, 2})->Unit(benchmark::kMillisecond);

void BM_GeneratorsSegre(benchmark::State& state) {
  const VarietySpec spec{Segre{std::vector<Index>(static_cast<std::size_t>(state.range(1)), state.range(0))}};
  for (auto _ : state) benchmark::DoNotOptimize(generators(spec));
}
BENCHMARK(BM_GeneratorsSegre)->Args({2, 3})->Args({3, 3})->Args({2, 4})->Unit(benchmark::kMillisecond);

void BM_GeneratorsVeronese(benchmark::State& state) {
  const VarietySpec spec{Veronese{state.range(0), static_cast<int>(state.range(1))}};
  for (auto _ : state) benchmark::DoNotOptimize(generators(spec));
}
BENCHMARK(BM_GeneratorsVeronese)->Args({4, 2})->Args({6, 2})->Args({4, 3})->Unit(benchmark::kMillisecond);

void BM_ApplyPhi(benchmark::State& state) {
  const Index n = state.range(0);
  const PolySystem sys = generators({Determinantal{n, n, 1}}).front();
  Rng rng(1);
  const Vector v = rng.vector(n * n, Field::Complex);
  const SymTensor u = power(v, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_phi(sys, u));
}
BENCHMARK(BM_ApplyPhi)->Arg(5)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
