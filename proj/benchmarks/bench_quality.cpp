#include <benchmark/benchmark.h>

#include "qmc/engine.hpp"
#include "qmc/quality.hpp"

namespace {

void BM_TProfile(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto set = qmc::stirling_matrix_set(qmc::make_field(5), 2, m);
  for (auto _ : state) benchmark::DoNotOptimize(qmc::t_profile(set, m));
}
BENCHMARK(BM_TProfile)->Arg(6)->Arg(10)->Arg(14);

void BM_VerifyNet(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto set = qmc::stirling_matrix_set(qmc::make_field(3), 2, m);
  const auto pts = qmc::generate_block(set, {}, qmc::IndexSequence::natural(3), 0, qmc::checked_pow(3, static_cast<unsigned>(m)), m);
  for (auto _ : state) benchmark::DoNotOptimize(qmc::verify_net(pts, 0, m));
}
BENCHMARK(BM_VerifyNet)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
