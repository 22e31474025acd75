#include <benchmark/benchmark.h>

#include "qgs/symbols.hpp"

#include <random>

using namespace qgs;

namespace {

std::vector<std::pair<GaussInt, GaussInt>> make_pairs(size_t n, int64_t bound) {
  std::mt19937_64 rng(99);
  std::vector<std::pair<GaussInt, GaussInt>> out;
  int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(bound)));
  while (out.size() < n) {
    GaussInt a(static_cast<int64_t>(rng() % (2 * r + 1)) - r,
               static_cast<int64_t>(rng() % (2 * r + 1)) - r);
    GaussInt g(static_cast<int64_t>(rng() % (2 * r + 1)) - r,
               static_cast<int64_t>(rng() % (2 * r + 1)) - r);
    if (a.is_zero() || g.is_zero() || g.is_even()) continue;
    out.emplace_back(a, g);
  }
  return out;
}

void BM_quartic_symbol_fast(benchmark::State& state) {
  auto pairs = make_pairs(4096, state.range(0));
  size_t i = 0;
  for (auto _ : state) {
    const auto& [a, g] = pairs[i++ & 4095];
    benchmark::DoNotOptimize(quartic_symbol(a, g));
  }
}
BENCHMARK(BM_quartic_symbol_fast)->Arg(1000)->Arg(100000)->Arg(10000000);

uint64_t next_split(uint64_t p) {
  while (p % 4 != 1 || !is_prime_u64(p)) ++p;
  return p;
}

void BM_quartic_symbol_euler_prime(benchmark::State& state) {
  GaussInt pi = split_prime(next_split(99990));
  auto pairs = make_pairs(4096, 99991);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quartic_symbol_euler(pairs[i++ & 4095].first, pi));
  }
}
BENCHMARK(BM_quartic_symbol_euler_prime);

void BM_canonical_mod(benchmark::State& state) {
  auto pairs = make_pairs(4096, 1000000);
  size_t i = 0;
  for (auto _ : state) {
    const auto& [a, g] = pairs[i++ & 4095];
    benchmark::DoNotOptimize(canonical_mod(a, g));
  }
}
BENCHMARK(BM_canonical_mod);

void BM_factor(benchmark::State& state) {
  auto pairs = make_pairs(4096, 1000000);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(factor(pairs[i++ & 4095].first));
  }
}
BENCHMARK(BM_factor);

}  // namespace

BENCHMARK_MAIN();
