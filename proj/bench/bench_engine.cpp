// Serial reference vs. distributed engine, complete linkage.
//
//   ./bench_engine --benchmark_filter=Distributed/1024

#include <benchmark/benchmark.h>

#include "lwhac/engine.hpp"
#include "lwhac/serial.hpp"
#include "lwhac/synthetic.hpp"

namespace {

void BM_Serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto matrix = lwhac::random_matrix(n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lwhac::serial_cluster(matrix, lwhac::LinkageScheme::Complete));
  }
}

void BM_Distributed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<lwhac::Rank>(state.range(1));
  const auto matrix = lwhac::random_matrix(n, 42);
  for (auto _ : state) {
    lwhac::InProcessTransport transport(p);
    benchmark::DoNotOptimize(
        lwhac::run_distributed(matrix, lwhac::LinkageScheme::Complete, p, transport));
  }
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Distributed)
    ->ArgsProduct({{256, 512, 1024}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
