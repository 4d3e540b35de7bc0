#include <benchmark/benchmark.h>

#include "liq/pde.hpp"

namespace {

liq::ProblemInputs coth_inputs() {
    liq::ProblemInputs in;
    in.horizon = 1.0;
    in.y0 = liq::Point::of(0.0);
    in.factor.dim = 1;
    in.factor.noise_dim = 1;
    in.factor.drift = {liq::ScalarField::constant(0.0)};
    in.factor.sigma = liq::MatrixField::constant(1, 1, {1.0});
    in.factor.lipschitz_const = 1.0;
    in.factor.ellipticity_min = 1.0;
    in.factor.drift_sup = 0.0;
    in.factor.sigma_sup = 1.0;
    in.domain.dim = 1;
    in.domain.lo = liq::Point::of(-4.0);
    in.domain.hi = liq::Point::of(4.0);
    in.costs.eta = liq::ScalarField::constant(1.0);
    in.costs.gamma = liq::ScalarField::constant(0.0);
    in.costs.lambda = liq::ScalarField::constant(1.0);
    in.costs.p = 2.0;
    in.costs.kappa0 = 1.0;
    return in;
}

void bm_solve_u_1d(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(coth_inputs());
    const liq::Grid grid =
        liq::make_grid(p, liq::GridSpec{static_cast<int>(state.range(0)), 41, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(liq::solve_u(p, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 41);
}
BENCHMARK(bm_solve_u_1d)->Arg(512)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void bm_solve_u_2d(benchmark::State& state) {
    liq::ProblemInputs in = coth_inputs();
    in.factor.dim = 2;
    in.factor.noise_dim = 2;
    in.factor.drift = {liq::ScalarField::constant(0.0), liq::ScalarField::constant(0.0)};
    in.factor.sigma = liq::MatrixField::constant(2, 2, {1.0, 0.0, 0.0, 0.8});
    in.factor.ellipticity_min = 0.64;
    in.domain.dim = 2;
    in.domain.lo = liq::Point::of(-3.0, -3.0);
    in.domain.hi = liq::Point::of(3.0, 3.0);
    in.y0 = liq::Point::of(0.0, 0.0);
    in.validation_nodes_per_axis = 21;
    const liq::LiquidationProblem p = liq::build_problem(in);
    const liq::Grid grid =
        liq::make_grid(p, liq::GridSpec{256, static_cast<int>(state.range(0)), 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(liq::solve_u(p, grid));
}
BENCHMARK(bm_solve_u_2d)->Arg(15)->Arg(21)->Arg(31)->Unit(benchmark::kMillisecond);

void bm_picard_sweep(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(coth_inputs());
    const liq::Grid grid = liq::make_grid(p, liq::GridSpec{2048, 21, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(liq::picard_run(p, grid, 0.125, 4));
}
BENCHMARK(bm_picard_sweep)->Unit(benchmark::kMillisecond);

void bm_surface_query(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(coth_inputs());
    const liq::ValueSurface vs = liq::solve_v(p, liq::make_grid(p, liq::GridSpec{1024, 41, 0.5}));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vs.value(t, liq::Point::of(0.37)));
        t = (t < 0.999) ? t + 1e-4 : 0.0;
    }
}
BENCHMARK(bm_surface_query);

}  // namespace
