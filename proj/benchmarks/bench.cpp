#include <benchmark/benchmark.h>
#include <eqih/catalog.hpp>
#include <random>

using namespace eqih;

namespace {

Matrix random_int_matrix(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(Ring::integers(), n, n);
  for (size_t r = 0; r < n; r++)
    for (size_t c = 0; c < n; c++) m.set(r, c, (long)(rng() % 19) - 9);
  return m;
}

void bm_smith_normal_form(benchmark::State& state) {
  Matrix m = random_int_matrix((size_t)state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m).rank);
}
BENCHMARK(bm_smith_normal_form)->Arg(10)->Arg(20)->Arg(40);

void bm_bar_construction(benchmark::State& state) {
  auto d = poincare_sphere(Ring::rationals());
  DciModule dm = build_dci(d);
  int maxlen = (int)state.range(0);
  Dualizing du = dualizing_complex(*dm.alg, maxlen);
  for (auto _ : state) {
    WordComplex wc = bar_complex(dm.mod, &du, Trunc{0, 0, maxlen});
    benchmark::DoNotOptimize(wc.complex().grading());
  }
}
BENCHMARK(bm_bar_construction)->Arg(6)->Arg(8)->Arg(10);

void bm_compute_flavor(benchmark::State& state) {
  auto d = poincare_sphere(Ring::rationals());
  Flavor f = (Flavor)state.range(0);
  for (auto _ : state) {
    auto r = compute(d, f, -8, 7);
    benchmark::DoNotOptimize(r.unrolled.size());
  }
}
BENCHMARK(bm_compute_flavor)
    ->Arg((int)Flavor::FramedTilde)
    ->Arg((int)Flavor::Plus)
    ->Arg((int)Flavor::Minus)
    ->Arg((int)Flavor::Tate);

void bm_index_spectral_sequence(benchmark::State& state) {
  auto d = poincare_sphere(Ring::rationals());
  for (auto _ : state) {
    auto pages = index_spectral_sequence(d, Flavor::FramedTilde, (int)state.range(0));
    benchmark::DoNotOptimize(pages.size());
  }
}
BENCHMARK(bm_index_spectral_sequence)->Arg(5)->Arg(9);

} // namespace

BENCHMARK_MAIN();
