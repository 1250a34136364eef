#include <benchmark/benchmark.h>

#include "qmc/engine.hpp"

namespace {

void BM_StirlingBlock(benchmark::State& state) {
  const auto set = qmc::stirling_matrix_set(qmc::make_field(5), 2, 8);
  const auto seq = qmc::IndexSequence::natural(5);
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(qmc::generate_block(set, {}, seq, 0, static_cast<std::uint64_t>(state.range(0)), 8, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StirlingBlock)->Args({625, 1})->Args({15625, 1})->Args({15625, 4})->Unit(benchmark::kMillisecond);

void BM_RationalInput(benchmark::State& state) {
  const auto set = qmc::stirling_matrix_set(qmc::make_field(3), 1, 8);
  const auto seq = qmc::IndexSequence::rational_affine(2, qmc::rational_digits(1, 2, 3));
  for (auto _ : state) benchmark::DoNotOptimize(qmc::generate_block(set, {}, seq, 0, 6561, 8));
  state.SetItemsProcessed(state.iterations() * 6561);
}
BENCHMARK(BM_RationalInput)->Unit(benchmark::kMillisecond);

void BM_ClassicalPoint(benchmark::State& state) {
  const auto set = qmc::stirling_matrix_set(qmc::make_field(5), 2, 8);
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qmc::generate_point_classical(set, {}, n++, 8));
}
BENCHMARK(BM_ClassicalPoint);

}  // namespace
