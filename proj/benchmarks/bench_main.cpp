#include "wsspec/eigenfunctions.hpp"
#include "wsspec/nu_engine.hpp"
#include "wsspec/spectra.hpp"
#include "wsspec/verifier.hpp"

#include <benchmark/benchmark.h>

using namespace wsspec;

static void BM_PtEpsilon(benchmark::State &state) {
  int n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pt_epsilon(n, 2.0, 0.1, 1.0));
    n = (n + 1) % kMaxLevelIndex;
  }
}
BENCHMARK(BM_PtEpsilon);

static void BM_ResolveBranches(benchmark::State &state) {
  const auto p = woods_saxon_problem(SpectralCase::PT, {-0.3, 2.0, 0.1, 0.0, 1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(resolve_branches(p));
}
BENCHMARK(BM_ResolveBranches);

static void BM_SolveEigenvalue(benchmark::State &state) {
  const DimensionlessParams p{0.0, 2.0, 0.1, 0.0, 1.0};
  const auto family = woods_saxon_family(SpectralCase::PT, p);
  const auto pair = consistent_eigenpair(SpectralCase::PT, p, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_eigenvalue(family, pair.branch_index, 2, pair.epsilon + 0.1));
}
BENCHMARK(BM_SolveEigenvalue);

static void BM_Jacobi(benchmark::State &state) {
  const JacobiParams jp{static_cast<int>(state.range(0)), {1.0, 2.0}, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(jacobi(jp, {0.3, 0.1}));
}
BENCHMARK(BM_Jacobi)->Arg(4)->Arg(16)->Arg(64);

static void BM_LevelReport(benchmark::State &state) {
  PotentialSpec s;
  s.variant = Variant::PTSymmetric;
  s.C_override = 0.05;
  for (auto _ : state)
    benchmark::DoNotOptimize(pt_level_report(s, {}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LevelReport)->Arg(3)->Arg(64);

static void BM_HermitianOracle(benchmark::State &state) {
  PotentialSpec s;
  s.V0R = 5.0;
  s.alpha = 1.0 / 1.2;
  s.R0 = 6.0;
  const auto grid = default_oracle_grid(s, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(hermitian_oracle(s, {}, grid, 4));
}
BENCHMARK(BM_HermitianOracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_QlEigenvalues(benchmark::State &state) {
  PotentialSpec s;
  s.V0R = 5.0;
  s.alpha = 1.0 / 1.2;
  s.R0 = 6.0;
  const auto t = fd_hamiltonian([&](double x) { return evaluate_potential(s, x).real(); },
                                {}, default_oracle_grid(s, static_cast<int>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(ql_eigenvalues(t));
}
BENCHMARK(BM_QlEigenvalues)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
