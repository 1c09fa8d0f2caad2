// Compares the serial reference rectangle scan with the OpenMP kernel.
#include <benchmark/benchmark.h>

#include "dwellflee/verify.hpp"

using namespace dwellflee;

namespace {

SwitchedPair bench_pair() {
  const Mat2 a1{-0.1, 1.4142135623730951, 0.0, -0.1};
  const Mat2 a2{0.1, 0.0, -0.4, 0.2};
  return build_pair(a1, a2);
}

void bm_rect_serial(benchmark::State& state) {
  const SwitchedPair p = bench_pair();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto scan = detail::rect_max_norm_serial(p, {}, 12, 80.0, 10.0, n, n, 100.0, 1e300);
    benchmark::DoNotOptimize(scan.max_norm);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void bm_rect_parallel(benchmark::State& state) {
  const SwitchedPair p = bench_pair();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto scan = detail::rect_max_norm_parallel(p, {}, 12, 80.0, 10.0, n, n, 100.0, 1e300);
    benchmark::DoNotOptimize(scan.max_norm);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void bm_verify_rect(benchmark::State& state) {
  const SwitchedPair p = bench_pair();
  const DwellFleeResult r = dwell_flee(p, 10.0);
  for (auto _ : state) {
    auto rep = verify_rect(p, r.tau + 1e-6, 10.0 - 1e-6);
    benchmark::DoNotOptimize(rep.max_norm);
  }
}

void bm_brute_force_tau(benchmark::State& state) {
  const SwitchedPair p = bench_pair();
  OracleGrids g;
  g.n_t = 320;
  g.n_s = 72;
  g.n_scalings = 17;
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_tau(p, 2.0, g));
  }
}

}  // namespace

BENCHMARK(bm_rect_serial)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_rect_parallel)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_verify_rect)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_brute_force_tau)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
