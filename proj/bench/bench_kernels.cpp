// Serial reference vs OpenMP kernels, plus one whole fractional derivative
// through each path. Sizes bracket the reference grid (n = 4096).

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fkdv/kernels.hpp"
#include "fkdv/operators.hpp"
#include "fkdv/transform.hpp"

using namespace fkdv;
using kernels::cplx;

namespace {

struct Data {
  std::vector<double> a, b, out;
  std::vector<cplx> z, w;
  explicit Data(std::size_t n) : a(n), b(n), out(n), z(n), w(n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      z[i] = {u(rng), u(rng)};
      w[i] = {u(rng), u(rng)};
    }
  }
};

template <bool Parallel>
void BM_multiply(benchmark::State& st) {
  Data d(st.range(0));
  for (auto _ : st) {
    if constexpr (Parallel) kernels::omp::multiply(std::span<cplx>(d.z), std::span<const cplx>(d.w));
    else kernels::serial::multiply(std::span<cplx>(d.z), std::span<const cplx>(d.w));
    benchmark::DoNotOptimize(d.z.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_product(benchmark::State& st) {
  Data d(st.range(0));
  for (auto _ : st) {
    if constexpr (Parallel) kernels::omp::product(d.a, d.b, d.out);
    else kernels::serial::product(d.a, d.b, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_chunked_sum(benchmark::State& st) {
  Data d(st.range(0));
  for (auto _ : st) {
    double s = Parallel ? kernels::omp::chunked_sum(d.a) : kernels::serial::chunked_sum(d.a);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_weighted_square_sum(benchmark::State& st) {
  Data d(st.range(0));
  for (auto _ : st) {
    double s = Parallel ? kernels::omp::weighted_square_sum(d.a, d.b) : kernels::serial::weighted_square_sum(d.a, d.b);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// dispatcher threshold pushed to the extremes so the whole operator runs
// on one path
template <bool Parallel>
void BM_frac_deriv(benchmark::State& st) {
  const std::size_t keep = kernels::parallel_threshold();
  kernels::set_parallel_threshold(Parallel ? 0 : std::size_t(-1));
  auto g = make_grid(int(st.range(0)), 200.0);
  const Field f = sample(g, [](double x) { return x * std::exp(-x * x); });
  for (auto _ : st) {
    Field r = frac_deriv(f, 0.5);
    benchmark::DoNotOptimize(r.samples.data());
  }
  kernels::set_parallel_threshold(keep);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

#define SIZES RangeMultiplier(8)->Range(1 << 12, 1 << 21)->UseRealTime()

BENCHMARK(BM_multiply<false>)->SIZES;
BENCHMARK(BM_multiply<true>)->SIZES;
BENCHMARK(BM_product<false>)->SIZES;
BENCHMARK(BM_product<true>)->SIZES;
BENCHMARK(BM_chunked_sum<false>)->SIZES;
BENCHMARK(BM_chunked_sum<true>)->SIZES;
BENCHMARK(BM_weighted_square_sum<false>)->SIZES;
BENCHMARK(BM_weighted_square_sum<true>)->SIZES;
BENCHMARK(BM_frac_deriv<false>)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->UseRealTime();
BENCHMARK(BM_frac_deriv<true>)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->UseRealTime();

BENCHMARK_MAIN();
