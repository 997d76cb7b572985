// Microbenchmarks for the hot paths: the modular multiply, the series
// transforms, the all-index kernels, and plain order-only classification.
// Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "girr/modarith.hpp"
#include "girr/modpseq.hpp"
#include "girr/ntt.hpp"
#include "girr/scan.hpp"

namespace {

std::uint64_t next_prime_at_least(std::uint64_t n) {
  while (!girr::modarith::is_prime_u64(n)) ++n;
  return n;
}

std::vector<std::uint32_t> random_residues(std::size_t n, std::uint64_t p) {
  std::mt19937_64 rng(12345);
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng() % p);
  return v;
}

void BM_MultiplyMod(benchmark::State& state) {
  const std::uint64_t p = next_prime_at_least(100'000);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto a = random_residues(n, p);
  const auto b = random_residues(n, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(girr::ntt::multiply_mod(a, b, p));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_MultiplyMod)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_SeriesReciprocal(benchmark::State& state) {
  const std::uint64_t p = next_prime_at_least(100'000);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto f = random_residues(n, p);
  f[0] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(girr::ntt::series_reciprocal(f, n, p));
  }
}
BENCHMARK(BM_SeriesReciprocal)->RangeMultiplier(4)->Range(1 << 10, 1 << 17);

void BM_BernoulliAllModP(benchmark::State& state) {
  const girr::modarith::PrimeModulus pm(next_prime_at_least(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(girr::modpseq::bernoulli_all_mod_p(pm));
  }
}
BENCHMARK(BM_BernoulliAllModP)->Arg(20'000)->Arg(40'000)->Arg(80'000)->Unit(benchmark::kMillisecond);

void BM_EulerAllModP(benchmark::State& state) {
  const girr::modarith::PrimeModulus pm(next_prime_at_least(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(girr::modpseq::euler_all_mod_p(pm));
  }
}
BENCHMARK(BM_EulerAllModP)->Arg(20'000)->Arg(40'000)->Arg(80'000)->Unit(benchmark::kMillisecond);

void BM_VoronoiSingle(benchmark::State& state) {
  const girr::modarith::PrimeModulus pm(next_prime_at_least(state.range(0)));
  const std::uint64_t m = 2 * ((pm.p() - 3) / 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(girr::modpseq::bernoulli_single_mod_p(pm, m));
  }
}
BENCHMARK(BM_VoronoiSingle)->Arg(20'000)->Arg(80'000)->Unit(benchmark::kMillisecond);

// The per-prime cost of an order-only scan (kind Q): factorization of p-1
// through the sieve plus the order ladder.
void BM_OrderOnlyRecord(benchmark::State& state) {
  const auto limit = static_cast<std::uint32_t>(state.range(0));
  const girr::modarith::SpfSieve sieve(limit);
  const auto primes = sieve.primes_in(limit / 2, limit);
  girr::scan::KindSet kinds;
  kinds.q = true;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        girr::scan::record_for_prime(primes[i % primes.size()], kinds, &sieve));
    ++i;
  }
}
BENCHMARK(BM_OrderOnlyRecord)->Arg(1'000'000)->Arg(5'000'000);

}  // namespace

BENCHMARK_MAIN();
