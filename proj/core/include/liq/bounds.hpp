#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "liq/sim.hpp"
#include "liq/surface.hpp"

namespace liq {

// Monte-Carlo estimate of the two-sided envelope of v at one point:
//   lower = exp(-theta (T-t)) / E[ int_t^T eta(Y_s)^-beta ds ]^(1/beta)
//   upper = (T-t)^-p E[ int_t^T eta(Y_s) + (T-s)^p lambda(Y_s) ds ]
// Both expectations come from the same factor paths; the lower bound's
// nonlinearity is handled with a delta-method standard error and a
// second-order bias correction.
struct BoundEstimate {
    double t = 0.0;
    Point y;
    double lower = 0.0;
    double se_lower = 0.0;
    double upper = 0.0;
    double se_upper = 0.0;
    long n_paths = 0;
    std::uint64_t seed = 0;
};

struct BoundsOptions {
    int steps_per_horizon = 2000;  // path step = T / steps_per_horizon
};

BoundEstimate estimate_bounds(const LiquidationProblem& problem, double t, const Point& y,
                              long n_paths, std::uint64_t seed, const BoundsOptions& options = {});

// Same quantities read as the Markovian representation of the no-dark-pool
// backward-equation bounds; rejects problems with theta != 0, where that
// formulation does not apply. Shares the estimate_bounds code path.
BoundEstimate bsde_bounds(const LiquidationProblem& problem, double t, const Point& y,
                          long n_paths, std::uint64_t seed, const BoundsOptions& options = {});

struct ProbeCheck {
    BoundEstimate estimate;
    double v = 0.0;
    bool ok = false;
};

struct BoundsReport {
    std::vector<ProbeCheck> probes;
    int violations = 0;
};

struct Probe {
    double t;
    Point y;
};

// Sandwich check lower - 3se <= v(t,y) <= upper + 3se at each probe.
// Violations are report content, not errors.
BoundsReport verify_surface_bounds(const ValueSurface& surface, const LiquidationProblem& problem,
                                   std::span<const Probe> probes, long n_paths,
                                   std::uint64_t seed, const BoundsOptions& options = {});

// E[ v(s_k, Y_{s_k}) |X_{s_k}|^p ] along an ensemble of strategy runs; the
// expected cost-to-go, which must decay to zero at the deadline.
struct ResidualSeries {
    std::vector<double> times;   // checkpoints snapped to the runs' mesh
    std::vector<double> values;
    std::vector<double> ses;
    bool decreasing_within_noise = true;
};

ResidualSeries residual_cost_diagnostic(const ValueSurface& surface,
                                        std::span<const PathResult> runs,
                                        std::span<const double> checkpoints, double p);

}  // namespace liq
