#include <benchmark/benchmark.h>

#include "qmc/discrepancy.hpp"
#include "qmc/engine.hpp"

namespace {

std::vector<qmc::RationalPoint> points(std::size_t s, std::uint64_t n) {
  const auto set = qmc::stirling_matrix_set(qmc::make_field(5), s, 6);
  return qmc::to_rational_points(qmc::generate_block(set, {}, qmc::IndexSequence::natural(5), 0, n, 6));
}

void BM_StarDiscrepancy2d(benchmark::State& state) {
  const auto pts = points(2, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qmc::star_discrepancy_exact(pts));
}
BENCHMARK(BM_StarDiscrepancy2d)->Arg(125)->Arg(625)->Arg(2500)->Unit(benchmark::kMillisecond);

void BM_StarDiscrepancy3d(benchmark::State& state) {
  const auto pts = points(3, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qmc::star_discrepancy_exact(pts));
}
BENCHMARK(BM_StarDiscrepancy3d)->Arg(125)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
