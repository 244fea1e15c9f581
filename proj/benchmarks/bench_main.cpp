#include <benchmark/benchmark.h>

#include <cmath>

#include "agds/evo_solver.hpp"
#include "agds/models/dynbc.hpp"
#include "agds/models/gk.hpp"
#include "agds/models/leontovich.hpp"

using namespace agds;

namespace {

double bump(double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::pow(std::sin(M_PI * t), 4); }

void gk_assembly(benchmark::State& state) {
  const Grid g = Grid::periodic(3, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(models::gk_assemble({}, g));
}
BENCHMARK(gk_assembly)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void leontovich_assembly(benchmark::State& state) {
  const Grid g = Grid::bounded(3, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(models::leontovich_assemble({}, g));
}
BENCHMARK(leontovich_assembly)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void skew_apply(benchmark::State& state) {
  models::GKSystem s = models::gk_assemble({}, Grid::periodic(3, state.range(0)));
  Vec x = Vec::LinSpaced(s.a.h->dim, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(s.a.a.apply(x));
  state.SetItemsProcessed(state.iterations() * s.a.a.coeffs().nonZeros());
}
BENCHMARK(skew_apply)->Arg(6)->Arg(10);

void dynbc_time_solve(benchmark::State& state) {
  models::DynBCSystem s = models::dynbc_assemble({}, Grid::bounded(2, state.range(0) + 1));
  Forcing f = models::dynbc_pressure_forcing(s, [](double t, double x, double y) { return bump(t) * (x + y); });
  EvoProblem p = make_problem(s.a, s.law, f, make_time_grid(0.0, 1.0, 0.01, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_time(p));
  state.SetItemsProcessed(state.iterations() * p.grid.steps());
}
BENCHMARK(dynbc_time_solve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void eddy_freq_solve(benchmark::State& state) {
  models::LeontovichParams prm;
  prm.boundary.kind = models::BoundaryLawSpec::Kind::eddy_fractional;
  prm.boundary.params = {1.0, 2.0};
  models::LeontovichSystem s = models::leontovich_assemble(prm, Grid::bounded(3, 5));
  Forcing f = models::leontovich_magnetic_forcing(s, [](double t, double x, double, double) {
    return std::array<double, 3>{0.0, 0.0, bump(t) * x};
  });
  EvoProblem p = make_problem(s.a, s.law, f, make_time_grid(0.0, 2.0, 0.05, 1.0));
  const Index n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_freq(p, n));
}
BENCHMARK(eddy_freq_solve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void posdef_sampling(benchmark::State& state) {
  MaterialLaw law = MaterialLaw::block_diagonal(
      {MaterialLaw::eddy_fractional(1.0, 2.0), MaterialLaw::mohsen(1.0, 0.3, 0.5, 2.0),
       MaterialLaw::senior(1.0, 2.0, 1.5)});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(posdef_check(law, 1.0, {n, n}));
}
BENCHMARK(posdef_sampling)->Arg(64)->Arg(256);

void gk_affine_report(benchmark::State& state) {
  models::GKSystem s = models::gk_assemble({}, Grid::periodic(3, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(affine_sufficient(s.law.m0(), s.law.m1()));
}
BENCHMARK(gk_affine_report)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
