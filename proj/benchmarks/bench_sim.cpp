#include <benchmark/benchmark.h>

#include "liq/bounds.hpp"
#include "liq/pde.hpp"
#include "liq/sim.hpp"

namespace {

liq::ProblemInputs darkpool_inputs() {
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
    in.costs.gamma = liq::ScalarField::constant(1.0);
    in.costs.lambda = liq::ScalarField::constant(1.0);
    in.costs.theta = 2.0;
    in.costs.p = 2.0;
    in.costs.kappa0 = 1.0;
    return in;
}

void bm_threefry_block(benchmark::State& state) {
    liq::rng::Stream s(1, 2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(s.next_u64());
}
BENCHMARK(bm_threefry_block);

void bm_normal_draw(benchmark::State& state) {
    liq::rng::Stream s(1, 2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(s.normal());
}
BENCHMARK(bm_normal_draw);

void bm_factor_path(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(darkpool_inputs());
    const std::vector<double> mesh =
        liq::uniform_mesh(0.0, 1.0, static_cast<int>(state.range(0)));
    std::vector<double> out;
    std::uint64_t path = 0;
    for (auto _ : state) {
        liq::rng::Stream noise(7, path++, liq::rng::kSubstreamFactor);
        out.clear();
        liq::simulate_factor(p, 0.0, p.y0, mesh, noise, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_factor_path)->Arg(512)->Arg(2000);

void bm_feedback_path(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(darkpool_inputs());
    const liq::ValueSurface vs = liq::solve_v(p, liq::make_grid(p, liq::GridSpec{1024, 21, 0.5}));
    const std::vector<double> mesh = liq::uniform_mesh(0.0, 1.0, 512);
    std::uint64_t path = 0;
    for (auto _ : state) {
        liq::rng::PathRng prng(7, path++);
        benchmark::DoNotOptimize(liq::run_strategy(p, liq::Strategy::feedback(), &vs, mesh, prng));
    }
}
BENCHMARK(bm_feedback_path)->Unit(benchmark::kMicrosecond);

void bm_bound_estimate(benchmark::State& state) {
    const liq::LiquidationProblem p = liq::build_problem(darkpool_inputs());
    for (auto _ : state)
        benchmark::DoNotOptimize(
            liq::estimate_bounds(p, 0.5, liq::Point::of(0.0), state.range(0), 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_bound_estimate)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
