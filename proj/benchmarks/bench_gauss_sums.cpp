#include <benchmark/benchmark.h>

#include "qgs/analytic.hpp"
#include "qgs/gauss_sums.hpp"

using namespace qgs;

namespace {

uint64_t next_split(uint64_t p) {
  while (p % 4 != 1 || !is_prime_u64(p)) ++p;
  return p;
}

void BM_prime_fast(benchmark::State& state) {
  GaussInt pi = split_prime(next_split(static_cast<uint64_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(prime_gauss_sums_fast(pi));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_prime_fast)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_direct_sum(benchmark::State& state) {
  GaussInt pi = split_prime(next_split(static_cast<uint64_t>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(g4_direct(GaussInt(1), pi));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_direct_sum)->Arg(10000)->Arg(100000);

void BM_compose_norm_1e4(benchmark::State& state) {
  GaussSumCache cache;
  G4Evaluator eval(&cache);
  GaussInt c = GaussInt(-1, 2) * GaussInt(3, 2) * GaussInt(-3, 0) * GaussInt(1, 4);
  Factorization f = factor(c);
  eval.g4(GaussInt(1), f);  // warm the prime records
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.g4(GaussInt(1), f));
  }
}
BENCHMARK(BM_compose_norm_1e4);

void BM_h_sum(benchmark::State& state) {
  GaussSumCache cache;
  G4Evaluator eval(&cache);
  SumContext ctx(eval);
  SmoothWeight r = SmoothWeight::bump();
  h_sum(static_cast<double>(state.range(0)), 0, BetaClass::One, r, ctx);  // warm
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_sum(static_cast<double>(state.range(0)), 0,
                                   BetaClass::One, r, ctx));
  }
}
BENCHMARK(BM_h_sum)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
