#include <benchmark/benchmark.h>

#include <cmath>

#include "owc/coupling.hpp"
#include "owc/params.hpp"
#include "owc/setup.hpp"
#include "owc/solver.hpp"
#include "owc/swe.hpp"

using namespace owc;

namespace {

const PhysicalParams kP = PhysicalParams::defaults();

DomainLayout layout_for(int n_pr) {
  DomainLayout lay;
  lay.L_ext = 10.0;
  lay.n_minus = 4 * n_pr;
  lay.n_pl = n_pr + n_pr / 2 + n_pr / 5;  // keeps dx roughly uniform
  lay.n_pr = n_pr;
  lay.derive(kP);
  return lay;
}

solver::State wave_state(const DomainLayout& lay) {
  InitialSpec is;
  is.type = InitialSpec::Type::gaussian;
  is.amplitude = 0.05;
  is.center = -5.0;
  is.width = 0.8;
  solver::State s;
  make_initial_state(kP, lay, is, s.u, s.g);
  return s;
}

}  // namespace

static void BM_Flux(benchmark::State& state) {
  const swe::CellState u{0.13, 0.4, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(swe::flux(u, kP.g));
}
BENCHMARK(BM_Flux);

static void BM_EigenDecomposition(benchmark::State& state) {
  const swe::CellState u{0.13, 0.4, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(swe::eigen(u, kP.g));
}
BENCHMARK(BM_EigenDecomposition);

static void BM_RiemannInvariants(benchmark::State& state) {
  const swe::CellState u{0.13, 0.4, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(swe::riemann_invariants(u, kP.g));
}
BENCHMARK(BM_RiemannInvariants);

static void BM_KreissCertificate(benchmark::State& state) {
  const swe::CellState um{0.05, 0.2, kP.h_s};
  const swe::CellState up{-0.02, -0.1, kP.h_0};
  const Mat4 S4 = swe::kreiss_symmetrizer4(um, up, kP.g);
  const Mat4 A4 = swe::system_matrix4(um, up, kP.g);
  const Mat2x4 M = swe::boundary_matrix();
  for (auto _ : state)
    benchmark::DoNotOptimize(swe::boundary_dissipativity(S4, A4, M));
}
BENCHMARK(BM_KreissCertificate);

static void BM_ThetaRhs(benchmark::State& state) {
  coupling::WallTraces tr;
  tr.left = {0.04, 0.1, kP.h_0};
  tr.right = {-0.01, 0.05, kP.h_0};
  const BoundaryState g{0.02, 150.0, 0.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(coupling::theta(g, tr, kP));
}
BENCHMARK(BM_ThetaRhs);

// one adaptive time step (speed scan + flux sweep + ODE + coupling) per
// iteration, matching the unit of work inside solver::run
static void BM_Step(benchmark::State& state) {
  const DomainLayout lay = layout_for(static_cast<int>(state.range(0)));
  solver::State s = wave_state(lay);
  solver::SolverConfig cfg;
  cfg.scheme = static_cast<solver::Scheme>(state.range(1));
  for (auto _ : state) {
    const double dt =
        0.4 * lay.min_dx() / solver::max_wave_speed(s.u, kP);
    solver::step(dt, s, kP, lay, cfg, {});
    benchmark::DoNotOptimize(s.u.em.q[0]);
  }
  state.SetItemsProcessed(state.iterations() * lay.total_cells());
}
BENCHMARK(BM_Step)
    ->ArgsProduct({{50, 200, 800},
                   {static_cast<int>(solver::Scheme::rusanov),
                    static_cast<int>(solver::Scheme::hll),
                    static_cast<int>(solver::Scheme::muscl_rusanov)}})
    ->ArgNames({"n_pr", "scheme"});

static void BM_LinearizedStep(benchmark::State& state) {
  const DomainLayout lay = layout_for(200);
  const solver::State frozen = wave_state(lay);
  solver::State s = frozen;
  const double dt =
      0.4 * lay.min_dx() / solver::max_wave_speed(frozen.u, kP);
  solver::LinearBoundaryData data;
  data.V = {0.0, frozen.g.q_i};
  for (auto _ : state) {
    solver::linearized_step(dt, frozen.u, s.u, data, kP, lay, {});
    benchmark::DoNotOptimize(s.u.em.q[0]);
  }
  state.SetItemsProcessed(state.iterations() * lay.total_cells());
}
BENCHMARK(BM_LinearizedStep);

BENCHMARK_MAIN();
