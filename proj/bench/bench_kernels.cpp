#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cylhypo/kernels.hpp"
#include "cylhypo/solver.hpp"
#include "cylhypo/spectral.hpp"

using namespace cylhypo;

namespace {

std::vector<kernels::cplx> random_block(int rows, int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  std::vector<kernels::cplx> v(static_cast<std::size_t>(rows) * n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

void BM_RowsSerial(benchmark::State& st) {
  const int rows = 64, n = static_cast<int>(st.range(0));
  auto v = random_block(rows, n);
  for (auto _ : st) {
    kernels::dft_rows_serial(v.data(), rows, n, -1);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_RowsSerial)->Arg(64)->Arg(256);

void BM_RowsOmp(benchmark::State& st) {
  const int rows = 64, n = static_cast<int>(st.range(0));
  auto v = random_block(rows, n);
  for (auto _ : st) {
    kernels::dft_rows_omp(v.data(), rows, n, -1);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_RowsOmp)->Arg(64)->Arg(256)->Arg(1024);

void BM_ForwardMixed(benchmark::State& st) {
  const Exec exec = st.range(0) ? Exec::Parallel : Exec::Serial;
  CylinderGrid g{64, 256, 12.0};
  auto f = GridFunction::sample(g, [](double t, double x) { return std::cos(t) * std::exp(-0.5 * x * x); });
  for (auto _ : st) benchmark::DoNotOptimize(forward_mixed(f, exec).values.data());
}
BENCHMARK(BM_ForwardMixed)->Arg(0)->Arg(1);

void BM_SolveTube(benchmark::State& st) {
  const Exec exec = st.range(0) ? Exec::Parallel : Exec::Serial;
  CylinderGrid g{64, 256, 12.0};
  TubeT op{TrigPolynomial{}, TrigPolynomial::constant(1.0) + TrigPolynomial::cosine(1.0),
           TrigPolynomial::constant(cplx(0, 0.3))};
  auto f = GridFunction::sample(g, [](double t, double x) { return std::cos(t) * std::exp(-0.5 * x * x); });
  for (auto _ : st) benchmark::DoNotOptimize(solve_tube(op, f, exec).u.values.data());
}
BENCHMARK(BM_SolveTube)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
