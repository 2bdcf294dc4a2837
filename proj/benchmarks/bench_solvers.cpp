#include <benchmark/benchmark.h>

#include "drlr/boxqp.hpp"
#include "drlr/data.hpp"
#include "drlr/lpadmm.hpp"
#include "drlr/outer.hpp"

namespace {

drlr::Dataset make_data(long n_samples, long n_features) {
  drlr::Rng rng(1);
  return drlr::generate_synthetic(n_samples, n_features, rng).data;
}

void BM_BoxQp(benchmark::State& state, drlr::BoxQpSolverKind kind) {
  const auto data = make_data(state.range(0), state.range(1));
  drlr::Rng rng(2);
  drlr::Vector b(data.num_samples());
  for (drlr::Index i = 0; i < b.size(); ++i) b[i] = rng.gaussian();
  const auto p = drlr::BoxQpProblem::make(data.signed_matrix_ptr(), b, 0.1);
  const drlr::Vector x0 = drlr::Vector::Zero(data.num_features());
  for (auto _ : state) {
    auto r = drlr::solve_box_qp(kind, p, x0, 1e-8, 10000);
    benchmark::DoNotOptimize(r.x.data());
  }
}
BENCHMARK_CAPTURE(BM_BoxQp, apg, drlr::BoxQpSolverKind::Apg)->Args({1000, 50});
BENCHMARK_CAPTURE(BM_BoxQp, coord, drlr::BoxQpSolverKind::Coordinate)->Args({1000, 50});
BENCHMARK_CAPTURE(BM_BoxQp, ascg, drlr::BoxQpSolverKind::ActiveSetCg)->Args({1000, 50});

void BM_LpAdmmStep(benchmark::State& state) {
  const auto data = make_data(state.range(0), state.range(1));
  const drlr::SubproblemInstance inst(data, 0.1, 1.0);
  const double bound = drlr::estimate_spectral_bound(inst.z());
  drlr::LpAdmmParams params;
  drlr::LpAdmmState s = drlr::initial_state(inst, 0.05);
  for (int k = 0; k < 20; ++k) s = drlr::lp_admm_step(s, inst, params, bound);
  for (auto _ : state) {
    auto next = drlr::lp_admm_step(s, inst, params, bound);
    benchmark::DoNotOptimize(next.w.data());
  }
}
BENCHMARK(BM_LpAdmmStep)->Args({100, 3})->Args({1000, 50})->Args({5000, 100});

void BM_Subproblem(benchmark::State& state) {
  const auto data = make_data(state.range(0), state.range(1));
  const drlr::SubproblemInstance inst(data, 0.1, 1.0);
  drlr::DrlrConfig cfg;
  cfg.gamma = state.range(2) ? 1.05 : 1.0;
  for (auto _ : state) {
    auto r = drlr::solve_subproblem(inst, cfg, drlr::BoxQpSolverKind::ActiveSetCg);
    benchmark::DoNotOptimize(r.solution.objective);
  }
}
BENCHMARK(BM_Subproblem)->Args({500, 10, 0})->Args({500, 10, 1})->Unit(benchmark::kMillisecond);

void BM_GoldenSolve(benchmark::State& state) {
  const auto data = make_data(state.range(0), state.range(1));
  drlr::DrlrConfig cfg;
  for (auto _ : state) {
    auto s = drlr::golden_section_solve(data, cfg, drlr::BoxQpSolverKind::ActiveSetCg);
    benchmark::DoNotOptimize(s.objective);
  }
}
BENCHMARK(BM_GoldenSolve)->Args({100, 3})->Args({500, 10})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
