// Microbenchmarks for the hot paths: the stable evaluators, inverse
// branches, orbit iteration, Newton cycle refinement, classification, and
// small renders.  Run with --benchmark_min_time=... as usual.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "tandyn/cycles.hpp"
#include "tandyn/dynamics.hpp"
#include "tandyn/inverse.hpp"
#include "tandyn/parameter_plane.hpp"
#include "tandyn/render.hpp"

namespace {

using tandyn::Cx;

void BM_tan_stable(benchmark::State& state) {
  Cx z(0.7, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tandyn::tan_stable(z));
    z += Cx(1e-9, 1e-9);  // defeat value caching without leaving the regime
  }
}
BENCHMARK(BM_tan_stable);

void BM_tan_stable_deep(benchmark::State& state) {
  Cx z(0.7, 25.0);  // rescaled branch
  for (auto _ : state) {
    benchmark::DoNotOptimize(tandyn::tan_stable(z));
    z += Cx(1e-9, 1e-9);
  }
}
BENCHMARK(BM_tan_stable_deep);

void BM_eval_f(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.3));
  Cx z(0.7, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tandyn::eval_f(lam, tandyn::ComplexPoint(z)));
    z += Cx(1e-9, 1e-9);
  }
}
BENCHMARK(BM_eval_f);

void BM_inverse_branch(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.3));
  Cx z(1.1, -0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tandyn::inverse_branch(3, lam, tandyn::ComplexPoint(z)));
    z += Cx(1e-9, 1e-9);
  }
}
BENCHMARK(BM_inverse_branch);

void BM_iterate_orbit(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.0));
  const tandyn::ComplexPoint z0(Cx(0.0, 2.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        tandyn::iterate_orbit(lam, z0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_iterate_orbit)->Arg(100)->Arg(1000);

void BM_refine_cycle(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.0));
  const tandyn::ComplexPoint guess(Cx(0.0, 1.9));
  for (auto _ : state)
    benchmark::DoNotOptimize(tandyn::refine_cycle_newton(lam, guess, 1));
}
BENCHMARK(BM_refine_cycle);

void BM_classify_parameter(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.3));
  for (auto _ : state)
    benchmark::DoNotOptimize(tandyn::classify_parameter(lam, 2000));
}
BENCHMARK(BM_classify_parameter);

void BM_render_param_small(benchmark::State& state) {
  tandyn::Viewport vp;
  vp.center = Cx(0.0, 0.0);
  vp.width = 12.0;
  vp.cols = vp.rows = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(tandyn::render_parameter_plane(vp, 300));
}
BENCHMARK(BM_render_param_small)->Arg(16)->Arg(32);

void BM_render_dynamic_small(benchmark::State& state) {
  const tandyn::Parameter lam(Cx(2.0, 0.0));
  tandyn::Viewport vp;
  vp.center = Cx(0.0, 0.0);
  vp.width = 12.0;
  vp.cols = vp.rows = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(tandyn::render_dynamic_plane(lam, vp, 500));
}
BENCHMARK(BM_render_dynamic_small)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
