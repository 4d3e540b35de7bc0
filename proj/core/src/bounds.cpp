#include "liq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liq/rng.hpp"
#include "liq/stats.hpp"

namespace liq {

BoundEstimate estimate_bounds(const LiquidationProblem& problem, double t, const Point& y,
                              long n_paths, std::uint64_t seed, const BoundsOptions& options) {
    if (!(t < problem.horizon)) throw std::invalid_argument("estimate_bounds: need t < T");
    if (n_paths < 2) throw std::invalid_argument("estimate_bounds: need n_paths >= 2");

    const double tau = problem.horizon - t;
    const double beta = problem.costs.beta();
    const double p = problem.costs.p;
    const double h = problem.horizon / options.steps_per_horizon;
    const int steps = std::max(8, static_cast<int>(std::ceil(tau / h)));
    const std::vector<double> mesh = uniform_mesh(t, problem.horizon, steps);

    // trapezoid weights, with the (T-s)^p factor evaluated analytically
    std::vector<double> w(mesh.size(), 0.0);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double half = 0.5 * (mesh[k + 1] - mesh[k]);
        w[k] += half;
        w[k + 1] += half;
    }

    std::vector<double> inv_eta_int(static_cast<std::size_t>(n_paths));
    std::vector<double> upper_int(static_cast<std::size_t>(n_paths));
    std::vector<double> factor;
    factor.reserve(mesh.size() * static_cast<std::size_t>(problem.factor.dim));

    for (long pth = 0; pth < n_paths; ++pth) {
        rng::Stream noise(seed, static_cast<std::uint64_t>(pth), rng::kSubstreamFactor);
        factor.clear();
        simulate_factor(problem, t, y, mesh, noise, factor);

        double i_inv = 0.0, i_upper = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            Point yk;
            yk.dim = problem.factor.dim;
            for (int a = 0; a < yk.dim; ++a)
                yk[a] = factor[k * static_cast<std::size_t>(yk.dim) + static_cast<std::size_t>(a)];
            const double eta = problem.costs.eta(yk);
            const double lam = problem.costs.lambda(yk);
            const double tleft = problem.horizon - mesh[k];
            i_inv += w[k] * std::pow(eta, -beta);
            i_upper += w[k] * (eta + std::pow(tleft, p) * lam);
        }
        inv_eta_int[static_cast<std::size_t>(pth)] = i_inv;
        upper_int[static_cast<std::size_t>(pth)] = i_upper;
    }

    const auto a_stats = stats::mean_se(inv_eta_int);
    const auto b_stats = stats::mean_se(upper_int);

    BoundEstimate est;
    est.t = t;
    est.y = y;
    est.n_paths = n_paths;
    est.seed = seed;

    const double discount = std::exp(-problem.costs.theta * tau);
    const double a = a_stats.mean;
    const double g = std::pow(a, -1.0 / beta);
    const double g1 = (1.0 / beta) * std::pow(a, -1.0 / beta - 1.0);       // |dg/da|
    const double g2 = (1.0 / beta) * (1.0 / beta + 1.0) * std::pow(a, -1.0 / beta - 2.0);
    est.lower = discount * (g - 0.5 * g2 * a_stats.se * a_stats.se);  // bias-corrected
    est.se_lower = discount * g1 * a_stats.se;

    const double scale = std::pow(tau, -p);
    est.upper = scale * b_stats.mean;
    est.se_upper = scale * b_stats.se;

    if (est.lower > est.upper + 3.0 * (est.se_lower + est.se_upper) + 1e-9 * est.upper)
        throw std::runtime_error("estimate_bounds: lower/upper envelope inverted; "
                                 "this indicates an implementation or model defect");
    return est;
}

BoundEstimate bsde_bounds(const LiquidationProblem& problem, double t, const Point& y,
                          long n_paths, std::uint64_t seed, const BoundsOptions& options) {
    if (problem.costs.theta != 0.0)
        throw std::invalid_argument(
            "bsde_bounds: the backward-equation bounds assume no passive orders (theta = 0)");
    return estimate_bounds(problem, t, y, n_paths, seed, options);
}

BoundsReport verify_surface_bounds(const ValueSurface& surface, const LiquidationProblem& problem,
                                   std::span<const Probe> probes, long n_paths,
                                   std::uint64_t seed, const BoundsOptions& options) {
    BoundsReport report;
    report.probes.reserve(probes.size());
    std::uint64_t probe_seed = seed;
    for (const Probe& probe : probes) {
        if (!(probe.t >= 0.0 && probe.t < problem.horizon))
            throw std::invalid_argument("verify_surface_bounds: probe time outside [0, T)");
        for (int a = 0; a < problem.domain.dim; ++a) {
            const double w = problem.domain.width(a);
            if (probe.y[a] < problem.domain.lo[a] + 0.2 * w ||
                probe.y[a] > problem.domain.hi[a] - 0.2 * w)
                throw std::invalid_argument(
                    "verify_surface_bounds: probe must stay in the 20% interior of the box");
        }
        ProbeCheck check;
        check.estimate = estimate_bounds(problem, probe.t, probe.y, n_paths, probe_seed, options);
        check.v = surface.value(probe.t, probe.y);
        const auto& e = check.estimate;
        const double slack = 1e-9 * (1.0 + std::abs(check.v));
        check.ok = (e.lower - 3.0 * e.se_lower <= check.v + slack) &&
                   (check.v <= e.upper + 3.0 * e.se_upper + slack);
        if (!check.ok) ++report.violations;
        report.probes.push_back(check);
        ++probe_seed;  // distinct, reproducible stream block per probe
    }
    return report;
}

ResidualSeries residual_cost_diagnostic(const ValueSurface& surface,
                                        std::span<const PathResult> runs,
                                        std::span<const double> checkpoints, double p) {
    if (runs.empty()) throw std::invalid_argument("residual_cost_diagnostic: no runs");
    ResidualSeries series;
    const auto& times = runs.front().times;
    for (double s : checkpoints) {
        if (!(s < surface.horizon))
            throw std::invalid_argument("residual_cost_diagnostic: checkpoint at or past T");
        // snap to the nearest mesh node of the runs
        const auto it = std::lower_bound(times.begin(), times.end(), s);
        std::size_t k = static_cast<std::size_t>(std::distance(times.begin(), it));
        if (k > 0 && (k == times.size() || times[k] - s > s - times[k - 1])) --k;
        if (times[k] >= surface.horizon) --k;
        const double snapped = times[k];

        std::vector<double> vals(runs.size());
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const PathResult& run = runs[r];
            const double v = surface.value(snapped, run.factor_at(k));
            vals[r] = v * std::pow(std::abs(run.position[k]), p);
        }
        const auto ms = stats::mean_se(vals);
        series.times.push_back(snapped);
        series.values.push_back(ms.mean);
        series.ses.push_back(ms.se);
    }
    for (std::size_t k = 1; k < series.values.size(); ++k) {
        const double allowance =
            3.0 * (series.ses[k] + series.ses[k - 1]) + 1e-12 * (1.0 + series.values.front());
        if (series.values[k] > series.values[k - 1] + allowance)
            series.decreasing_within_noise = false;
    }
    return series;
}

}  // namespace liq
