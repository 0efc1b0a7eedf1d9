#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "danopt/linalg.hpp"
#include "danopt/rng.hpp"
#include "danopt/symmetric_matrix.hpp"

using namespace danopt;

namespace {

SymmetricMatrix random_symmetric(int dim, Rng& rng) {
  SymmetricMatrix a(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) a.at(i, j) = rng.normal();
  return a;
}

SymmetricMatrix random_spd(int dim, Rng& rng) {
  auto a = random_symmetric(dim, rng);
  Eigen::MatrixXd d = a.to_dense();
  return SymmetricMatrix::from_dense(d * d.transpose() +
                                     Eigen::MatrixXd::Identity(dim, dim));
}

void BM_rank1_truncate(benchmark::State& state) {
  Rng rng(7);
  const int dim = static_cast<int>(state.range(0));
  const auto delta = random_symmetric(dim, rng);
  for (auto _ : state) {
    auto t = rank1_truncate(delta);
    benchmark::DoNotOptimize(t.residual_norm);
  }
}
BENCHMARK(BM_rank1_truncate)->Arg(16)->Arg(55)->Arg(128);

void BM_spd_solve(benchmark::State& state) {
  Rng rng(8);
  const int dim = static_cast<int>(state.range(0));
  const auto a = random_spd(dim, rng);
  Eigen::VectorXd b(dim);
  for (int i = 0; i < dim; ++i) b[i] = rng.normal();
  for (auto _ : state) {
    auto x = spd_solve(a, b);
    benchmark::DoNotOptimize(x.sum());
  }
}
BENCHMARK(BM_spd_solve)->Arg(16)->Arg(55)->Arg(128);

// Refactorize-per-solve versus the incremental rank-1 chain, at the chain
// length a few gated iterations would accumulate.
void BM_smw_chain_solve(benchmark::State& state) {
  Rng rng(9);
  const int dim = static_cast<int>(state.range(0));
  const auto base = random_spd(dim, rng);
  SmwSolver solver(base);
  for (int u = 0; u < 8; ++u) {
    Eigen::VectorXd h(dim);
    for (int i = 0; i < dim; ++i) h[i] = 0.1 * rng.normal();
    if (!solver.update(1.0, h)) break;
  }
  Eigen::VectorXd b(dim);
  for (int i = 0; i < dim; ++i) b[i] = rng.normal();
  for (auto _ : state) {
    auto x = solver.solve(b);
    benchmark::DoNotOptimize(x.sum());
  }
}
BENCHMARK(BM_smw_chain_solve)->Arg(16)->Arg(55)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
