#include <benchmark/benchmark.h>

#include <random>

#include "phifn/norm_est.hpp"
#include "phifn/phi_action.hpp"
#include "phifn/phi_dense.hpp"

using namespace phifn;

namespace {

DenseMatrix<double> random_dense(std::size_t n, double norm1, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> N(0, 1);
  DenseMatrix<double> a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = N(g);
  return scale(a, norm1 / one_norm(a));
}

SparseMatrix<double> random_sparse(std::size_t n, double density, double norm1, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<SparseMatrix<double>::Triplet> ts;
  for (std::size_t i = 0; i < n; ++i) {
    ts.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i), N(g)});
    for (std::size_t j = 0; j < n; ++j)
      if (u(g) < density)
        ts.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), N(g)});
  }
  auto a = SparseMatrix<double>::from_triplets(n, n, std::move(ts));
  return a.scaled(norm1 / one_norm(a));
}

void BM_MatMul(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  DenseMatrix<double> a = random_dense(n, 1.0, 11);
  DenseMatrix<double> b = random_dense(n, 1.0, 13);
  OpCounter c;
  for (auto _ : state) benchmark::DoNotOptimize(mat_mul(a, b, c));
  state.counters["flops"] = benchmark::Counter(2.0 * double(n) * double(n) * double(n),
                                               benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_MatMul)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PhiDense(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Strategy strat = state.range(1) ? Strategy::costmin : Strategy::sequential;
  DenseMatrix<double> a = random_dense(n, 8.0, 17);
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(phi_dense(a, strat, c));
  }
  state.SetLabel(state.range(1) ? "costmin" : "sequential");
}
BENCHMARK(BM_PhiDense)
    ->Args({32, 0})
    ->Args({32, 1})
    ->Args({128, 0})
    ->Args({128, 1})
    ->Unit(benchmark::kMillisecond);

void BM_PhiAction(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  SparseMatrix<double> a = random_sparse(n, 0.004, 6.0, 23);
  DenseMatrix<double> b(n, 1);
  for (std::size_t i = 0; i < n; ++i) b(i, 0) = 1.0;
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(phi_action(a, b, ThetaTable::builtin(), c));
  }
}
BENCHMARK(BM_PhiAction)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_NormestPower(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  SparseMatrix<double> a = random_sparse(400, 0.02, 3.0, 29);
  for (auto _ : state) benchmark::DoNotOptimize(normest_power(a, p, {}));
}
BENCHMARK(BM_NormestPower)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
