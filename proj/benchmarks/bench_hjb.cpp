#include <benchmark/benchmark.h>

#include "liq/hjb.hpp"

namespace {

using liq::hjb::LocalCosts;

void bm_eval_F(benchmark::State& state) {
    const LocalCosts c{1.2, 0.7, 0.4, 1.5, 2.0, 1.0};
    double v = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(liq::hjb::eval_F(c, v));
        v = (v < 10.0) ? v + 1e-3 : 0.1;
    }
}
BENCHMARK(bm_eval_F);

void bm_eval_f_quadratic(benchmark::State& state) {
    const LocalCosts c{1.2, 0.7, 0.4, 1.5, 2.0, 1.0};
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(liq::hjb::eval_f(c, 0.2, 0.5, u, 1e-12));
        u = (u < 0.5) ? u + 1e-4 : 0.0;
    }
}
BENCHMARK(bm_eval_f_quadratic);

// non-integer exponent: the truncated binomial series is live
void bm_eval_f_series(benchmark::State& state) {
    const double p = 1.6;
    const LocalCosts c{1.2, 0.7, 0.4, 1.5, p, 1.0 / (p - 1.0)};
    const double z = state.range(0) / 100.0;
    const double u = z * 0.5 * c.eta;
    for (auto _ : state)
        benchmark::DoNotOptimize(liq::hjb::eval_f(c, 0.2, 0.5, u, 1e-12));
}
BENCHMARK(bm_eval_f_series)->Arg(10)->Arg(50)->Arg(90)->Arg(99);

}  // namespace
