#include <benchmark/benchmark.h>

#include "divcert/certify.hpp"
#include "divcert/descent.hpp"
#include "divcert/heights.hpp"

using namespace divcert;

static void BM_Doubling(benchmark::State& state) {
  const Curve c = make_family(2, 25);
  CurvePoint p = family_point(c);
  for (int i = 0; i < state.range(0); ++i) p = c.dbl(p);
  for (auto _ : state) benchmark::DoNotOptimize(c.dbl(p));
  state.SetLabel("after " + std::to_string(state.range(0)) + " doublings");
}
BENCHMARK(BM_Doubling)->Arg(0)->Arg(4)->Arg(8);

static void BM_CanonicalHeight(benchmark::State& state) {
  const Curve c = make_family(2, 25);
  const CurvePoint p = family_point(c);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_height(c, p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CanonicalHeight)->DenseRange(2, 8, 3);

static void BM_IsPrime(benchmark::State& state) {
  Int n = Int(1) << static_cast<unsigned long>(state.range(0));
  mpz_nextprime(n.get_mpz_t(), n.get_mpz_t());
  for (auto _ : state) benchmark::DoNotOptimize(is_prime(n));
}
BENCHMARK(BM_IsPrime)->Arg(60)->Arg(127)->Arg(512);

static void BM_Selmer(benchmark::State& state) {
  const Int l(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(selmer(l));
}
BENCHMARK(BM_Selmer)->Arg(41)->Arg(5641)->Arg(99989);

static void BM_LocallySolubleAt2(benchmark::State& state) {
  const Torsor t = make_torsor(IsogenySide::PhiHat, Int(-1), Int(5641));
  for (auto _ : state) benchmark::DoNotOptimize(locally_soluble(t, Place::at(2)));
}
BENCHMARK(BM_LocallySolubleAt2);

static void BM_CertifyMain(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(certify_main(Int(2), Int(25), Int(5), 1));
}
BENCHMARK(BM_CertifyMain);

static void BM_CertifyInfinite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(certify_infinite_instance(Int(2), Int(75), Int(5), 1));
}
BENCHMARK(BM_CertifyInfinite);
BENCHMARK_MAIN();
