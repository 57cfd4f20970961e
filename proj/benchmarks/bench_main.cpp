#include <benchmark/benchmark.h>

#include "khess/constants.hpp"
#include "khess/phase_plane.hpp"
#include "khess/pohozaev.hpp"
#include "khess/radial_profiles.hpp"

using namespace khess;

static void BM_Trajectory(benchmark::State& state) {
  const ProblemSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_trajectory(spec).t_end());
}
BENCHMARK(BM_Trajectory)->Args({6, 1})->Args({6, 5})->Args({6, 6})->Args({12, 3});

static void BM_BifurcationSweep(benchmark::State& state) {
  const ProblemSpec spec(6, 5);
  const auto traj = integrate_trajectory(spec);
  const double beta = beta_exact(spec).value();
  std::vector<double> grid;
  for (int i = 1; i <= state.range(0); ++i) grid.push_back(2 * beta * i / state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bifurcation_sweep(traj, grid).entries.size());
}
BENCHMARK(BM_BifurcationSweep)->Arg(50)->Arg(200);

static void BM_Reconstruct(benchmark::State& state) {
  const ProblemSpec spec(5, 2);
  const auto traj = integrate_trajectory(spec);
  const double t = *traj.first_time_v_equals(0.5 * std::min(1.0, traj.max_v()));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_profile(spec, traj, t).u.front());
}
BENCHMARK(BM_Reconstruct);

static void BM_Shoot(benchmark::State& state) {
  const ProblemSpec spec(6, 2);
  const double p = critical_exponent(spec).value() * state.range(0) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(shoot_power(spec, p).s_stop());
}
BENCHMARK(BM_Shoot)->Arg(8)->Arg(12);

static void BM_IdentityExplicit(benchmark::State& state) {
  const ProblemSpec spec(3, 3);
  const auto e = explicit_ma(3, 0.5);
  const auto g = NonlinearitySpec::exponential(e.a_eps);
  for (auto _ : state) benchmark::DoNotOptimize(identity_radial(spec, e.profile, g).residual);
}
BENCHMARK(BM_IdentityExplicit);

BENCHMARK_MAIN();
