#include "liq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liq/stats.hpp"

namespace liq {

namespace {

Point point_from(const std::vector<double>& flat, std::size_t node, int dim) {
    Point y;
    y.dim = dim;
    for (int a = 0; a < dim; ++a)
        y[a] = flat[node * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
    return y;
}

Point lerp(const Point& a, const Point& b, double w) {
    Point out = a;
    for (int axis = 0; axis < a.dim; ++axis) out[axis] = a[axis] + w * (b[axis] - a[axis]);
    return out;
}

void reflect_into(const Box& box, Point& y) {
    for (int a = 0; a < box.dim; ++a) {
        double x = y[a];
        // a couple of bounces suffice for any realistic step size
        for (int guard = 0; guard < 64; ++guard) {
            if (x < box.lo[a])
                x = 2.0 * box.lo[a] - x;
            else if (x > box.hi[a])
                x = 2.0 * box.hi[a] - x;
            else
                break;
        }
        y[a] = std::clamp(x, box.lo[a], box.hi[a]);
    }
}

double power_cost(double coeff, double magnitude, double p) {
    if (magnitude == 0.0) return 0.0;
    return coeff * std::pow(std::abs(magnitude), p);
}

}  // namespace

Point PathResult::factor_at(std::size_t node) const { return point_from(factor, node, dim); }

Strategy Strategy::rate_table(std::vector<double> times, std::vector<double> rates,
                              std::vector<double> posts) {
    if (times.size() < 2 || rates.size() + 1 != times.size() || posts.size() != rates.size())
        throw std::invalid_argument("rate_table: need n times, n-1 rates, n-1 posts");
    Strategy s;
    s.kind = Kind::RateTable;
    s.table_times = std::move(times);
    s.table_rates = std::move(rates);
    s.table_posts = std::move(posts);
    return s;
}

std::vector<double> uniform_mesh(double t0, double horizon, int steps) {
    if (steps < 1 || !(horizon > t0)) throw std::invalid_argument("uniform_mesh: bad arguments");
    std::vector<double> mesh(static_cast<std::size_t>(steps) + 1);
    const double dt = (horizon - t0) / steps;
    for (int k = 0; k <= steps; ++k) mesh[static_cast<std::size_t>(k)] = t0 + k * dt;
    mesh.back() = horizon;
    return mesh;
}

void simulate_factor(const LiquidationProblem& problem, double t0, const Point& y0,
                     std::span<const double> mesh, rng::Stream& noise,
                     std::vector<double>& factor_out) {
    const int d = problem.factor.dim;
    const int n = problem.factor.noise_dim;
    if (mesh.empty() || std::abs(mesh.front() - t0) > 1e-12)
        throw std::invalid_argument("simulate_factor: mesh must start at t0");

    std::vector<double> sig(static_cast<std::size_t>(d * n));
    Point y = y0;
    y.dim = d;
    reflect_into(problem.domain, y);

    factor_out.reserve(factor_out.size() + mesh.size() * static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) factor_out.push_back(y[a]);

    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double dt = mesh[k + 1] - mesh[k];
        const double sdt = std::sqrt(dt);
        problem.factor.sigma.eval(y, sig.data());
        Point next = y;
        for (int a = 0; a < d; ++a)
            next[a] += problem.factor.drift[static_cast<std::size_t>(a)](y) * dt;
        for (int j = 0; j < n; ++j) {
            const double z = noise.normal() * sdt;
            for (int a = 0; a < d; ++a)
                next[a] += sig[static_cast<std::size_t>(a * n + j)] * z;
        }
        reflect_into(problem.domain, next);
        y = next;
        for (int a = 0; a < d; ++a) factor_out.push_back(y[a]);
    }
}

std::vector<double> sample_fill_times(double theta, double t0, double horizon,
                                      rng::Stream& clock) {
    if (theta < 0.0) throw std::invalid_argument("sample_fill_times: theta must be >= 0");
    std::vector<double> fills;
    if (theta == 0.0) return fills;
    double t = t0 + clock.exponential(theta);
    while (t <= horizon) {
        fills.push_back(t);
        t += clock.exponential(theta);
    }
    return fills;
}

namespace {

struct SegmentControls {
    double rate = 0.0;       // xi at the segment start
    double decay = -1.0;     // feedback decay rate (v/eta)^beta; < 0 means linear rate
    double post_frac = 0.0;  // posted fraction of the pre-jump position
    double post_abs = 0.0;   // posted absolute size (rate tables)
    bool frac_post = true;
};

SegmentControls controls_at(const LiquidationProblem& problem, const Strategy& strategy,
                            const ValueSurface* surface, double t, const Point& y, double x) {
    SegmentControls c;
    switch (strategy.kind) {
        case Strategy::Kind::Feedback:
        case Strategy::Kind::PrimaryOnlyFeedback: {
            if (!surface)
                throw std::invalid_argument("run_strategy: feedback strategy needs a value surface");
            const double v = surface->value(t, y);
            const auto local = hjb::sample_costs(problem.costs, y);
            const auto fb = hjb::feedback(local, v, x);
            c.decay = std::pow(v / local.eta, local.beta);
            c.rate = fb.xi_rate;
            c.post_frac = (x != 0.0) ? fb.pi_size / x : 0.0;
            if (strategy.kind == Strategy::Kind::PrimaryOnlyFeedback) c.post_frac = 0.0;
            break;
        }
        case Strategy::Kind::Twap: {
            c.rate = problem.x0 / (problem.horizon - problem.t0);
            c.post_frac = 0.0;
            break;
        }
        case Strategy::Kind::RateTable: {
            const auto& tt = strategy.table_times;
            auto it = std::upper_bound(tt.begin(), tt.end(), t);
            std::size_t seg = (it == tt.begin()) ? 0 : static_cast<std::size_t>(it - tt.begin()) - 1;
            seg = std::min(seg, strategy.table_rates.size() - 1);
            c.rate = strategy.table_rates[seg];
            c.post_abs = strategy.table_posts[seg];
            c.frac_post = false;
            break;
        }
    }
    return c;
}

// position after advancing dt under the segment's rate law
double advance_position(const SegmentControls& c, double x, double dt) {
    if (c.decay >= 0.0) return x * std::exp(-c.decay * dt);
    return x - c.rate * dt;
}

double rate_at(const SegmentControls& c, double x) {
    return (c.decay >= 0.0) ? c.decay * x : c.rate;
}

}  // namespace

PathResult run_strategy(const LiquidationProblem& problem, const Strategy& strategy,
                        const ValueSurface* surface, std::span<const double> mesh,
                        rng::PathRng& rng) {
    const std::size_t n_nodes = mesh.size();
    if (n_nodes < 2) throw std::invalid_argument("run_strategy: mesh needs >= 2 nodes");
    if (std::abs(mesh.back() - problem.horizon) > 1e-12)
        throw std::invalid_argument("run_strategy: mesh must end at the horizon");

    PathResult path;
    path.dim = problem.factor.dim;
    path.times.assign(mesh.begin(), mesh.end());
    simulate_factor(problem, mesh.front(), problem.y0, mesh, rng.factor, path.factor);
    const std::vector<double> fills =
        sample_fill_times(problem.costs.theta, mesh.front(), problem.horizon, rng.poisson);

    path.position.resize(n_nodes);
    path.xi.assign(n_nodes, 0.0);
    path.pi.assign(n_nodes, 0.0);
    path.running_cost.assign(n_nodes, 0.0);

    const double p = problem.costs.p;
    double x = problem.x0;
    path.position[0] = x;
    std::size_t fill_idx = 0;

    for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
        const double ta = mesh[k];
        const double tb = mesh[k + 1];
        const Point ya = path.factor_at(k);
        const Point yb = path.factor_at(k + 1);

        const SegmentControls c = controls_at(problem, strategy, surface, ta, ya, x);
        path.xi[k] = rate_at(c, x);
        path.pi[k] = c.frac_post ? c.post_frac * x : c.post_abs;

        // intensity-form dark-pool bookkeeping, recorded as a cross-check
        path.cost.pool_intensity +=
            problem.costs.theta * power_cost(problem.costs.gamma(ya), path.pi[k], p) * (tb - ta);

        double t_cur = ta;
        double x_cur = x;
        auto y_at = [&](double t) { return lerp(ya, yb, (t - ta) / (tb - ta)); };
        // trapezoid of eta |xi|^p and lambda |X|^p over one event-free span
        auto accumulate = [&](double t0, double x0, double t1, double x1) {
            const Point y0 = y_at(t0);
            const Point y1 = y_at(t1);
            const double half = 0.5 * (t1 - t0);
            path.cost.rate += half * (power_cost(problem.costs.eta(y0), rate_at(c, x0), p) +
                                      power_cost(problem.costs.eta(y1), rate_at(c, x1), p));
            path.cost.risk += half * (power_cost(problem.costs.lambda(y0), x0, p) +
                                      power_cost(problem.costs.lambda(y1), x1, p));
        };

        while (fill_idx < fills.size() && fills[fill_idx] <= tb) {
            const double tf = fills[fill_idx];
            const double x_pre = advance_position(c, x_cur, tf - t_cur);
            accumulate(t_cur, x_cur, tf, x_pre);
            const double posted = c.frac_post ? c.post_frac * x_pre : c.post_abs;
            const Point yf = y_at(tf);
            path.cost.pool_pathwise += power_cost(problem.costs.gamma(yf), posted, p);
            path.fills.push_back({tf, posted});
            x_cur = x_pre - posted;
            t_cur = tf;
            ++fill_idx;
        }

        const double x_end = advance_position(c, x_cur, tb - t_cur);
        accumulate(t_cur, x_cur, tb, x_end);
        x = x_end;
        path.position[k + 1] = x;
        path.running_cost[k + 1] = path.cost.rate + path.cost.risk + path.cost.pool_pathwise;
    }

    // forced clean-up of whatever the strategy left at the deadline
    path.terminal_position = x;
    const double dt_last = mesh[n_nodes - 1] - mesh[n_nodes - 2];
    const Point yT = path.factor_at(n_nodes - 1);
    path.xi[n_nodes - 1] = x / dt_last;
    path.cost.forced = power_cost(problem.costs.eta(yT), x / dt_last, p) * dt_last;
    path.running_cost[n_nodes - 1] += path.cost.forced;
    return path;
}

CostEstimate estimate_cost(const LiquidationProblem& problem, const Strategy& strategy,
                           const ValueSurface* surface, long n_paths, std::uint64_t seed,
                           int mesh_steps) {
    if (n_paths < 2) throw std::invalid_argument("estimate_cost: need n_paths >= 2");
    const std::vector<double> mesh = uniform_mesh(problem.t0, problem.horizon, mesh_steps);

    std::vector<double> totals(static_cast<std::size_t>(n_paths));
    std::vector<double> terminals(static_cast<std::size_t>(n_paths));
    std::vector<double> forced(static_cast<std::size_t>(n_paths));
    for (long pth = 0; pth < n_paths; ++pth) {
        rng::PathRng prng(seed, static_cast<std::uint64_t>(pth));
        const PathResult res = run_strategy(problem, strategy, surface, mesh, prng);
        totals[static_cast<std::size_t>(pth)] = res.cost.total();
        terminals[static_cast<std::size_t>(pth)] = std::abs(res.terminal_position);
        forced[static_cast<std::size_t>(pth)] = res.cost.forced;
    }
    const auto total_stats = stats::mean_se(totals);
    CostEstimate est;
    est.mean = total_stats.mean;
    est.se = total_stats.se;
    est.mean_abs_terminal = stats::mean_se(terminals).mean;
    const double forced_mean = stats::mean_se(forced).mean;
    est.forced_share = (est.mean > 0.0) ? forced_mean / est.mean : 0.0;
    est.n_paths = n_paths;
    return est;
}

ReductionResult monotone_reduction(const LiquidationProblem& problem, const ControlPath& raw) {
    const std::size_t n = raw.times.size();
    if (n < 2 || raw.rates.size() != n - 1 || raw.fill_nodes.size() != raw.posted.size())
        throw std::invalid_argument("monotone_reduction: malformed control path");
    const double sign = (raw.x0 < 0.0) ? -1.0 : 1.0;
    const double p = problem.costs.p;

    // forward pass for the reduced controls; record where the reduced
    // position hits zero inside a segment
    std::vector<double> reduced_rates(n - 1, 0.0);
    std::vector<double> reduced_posted(raw.posted.size(), 0.0);
    std::vector<double> crossings;
    {
        double xbar = sign * raw.x0;  // >= 0
        std::size_t fill = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            while (fill < raw.fill_nodes.size() &&
                   static_cast<std::size_t>(raw.fill_nodes[fill]) == k) {
                const double pi = sign * raw.posted[fill];
                const double pbar = (pi >= 0.0 && xbar > 0.0) ? std::min(pi, xbar) : 0.0;
                reduced_posted[fill] = sign * pbar;
                xbar -= pbar;
                ++fill;
            }
            const double xi = sign * raw.rates[k];
            const double xibar = (xi >= 0.0 && xbar > 0.0) ? xi : 0.0;
            reduced_rates[k] = sign * xibar;
            const double dt = raw.times[k + 1] - raw.times[k];
            if (xibar > 0.0 && xbar - xibar * dt < 0.0) {
                crossings.push_back(raw.times[k] + xbar / xibar);
                xbar = 0.0;
            } else {
                xbar -= xibar * dt;
            }
        }
        // a fill posted exactly at the final node still gets clipped
        while (fill < raw.fill_nodes.size()) {
            const double pi = sign * raw.posted[fill];
            const double pbar = (pi >= 0.0 && xbar > 0.0) ? std::min(pi, xbar) : 0.0;
            reduced_posted[fill] = sign * pbar;
            xbar -= pbar;
            ++fill;
        }
    }

    ReductionResult out;
    out.reduced_rates = reduced_rates;
    out.reduced_posted = reduced_posted;
    out.refined_times = raw.times;
    out.refined_times.insert(out.refined_times.end(), crossings.begin(), crossings.end());
    std::sort(out.refined_times.begin(), out.refined_times.end());
    out.refined_times.erase(std::unique(out.refined_times.begin(), out.refined_times.end()),
                            out.refined_times.end());

    // joint sweep over refined nodes: exact piecewise-linear positions for
    // both paths, trapezoid costs at identical evaluation points
    auto eval_path = [&](bool reduced, std::vector<double>* positions) -> double {
        double cost = 0.0;
        double x = sign * raw.x0;
        std::size_t seg = 0;
        std::size_t fill = 0;
        positions->clear();
        positions->reserve(out.refined_times.size());

        auto factor_at_time = [&](double t, std::size_t hint_seg) {
            const Point y0 = point_from(raw.factor, hint_seg, raw.dim);
            const Point y1 = point_from(raw.factor, hint_seg + 1, raw.dim);
            const double span = raw.times[hint_seg + 1] - raw.times[hint_seg];
            const double w = span > 0.0 ? (t - raw.times[hint_seg]) / span : 0.0;
            return lerp(y0, y1, w);
        };

        for (std::size_t r = 0; r < out.refined_times.size(); ++r) {
            const double t = out.refined_times[r];
            while (seg + 2 < raw.times.size() && raw.times[seg + 1] < t) ++seg;

            if (r > 0) {
                const double t_prev = out.refined_times[r - 1];
                const double dt = t - t_prev;
                // segment rate with the reduced path's zero cutoff applied
                double xi = reduced ? sign * reduced_rates[seg] : sign * raw.rates[seg];
                if (reduced && x <= 0.0) xi = 0.0;
                double x_next = x - xi * dt;
                if (reduced && x_next < 0.0) x_next = 0.0;  // crossing node is exact
                const Point ya = factor_at_time(t_prev, seg);
                const Point yb = factor_at_time(t, seg);
                const double fa = power_cost(problem.costs.eta(ya), xi, p) +
                                  power_cost(problem.costs.lambda(ya), x, p);
                const double fb = power_cost(problem.costs.eta(yb), xi, p) +
                                  power_cost(problem.costs.lambda(yb), x_next, p);
                cost += 0.5 * dt * (fa + fb);
                x = x_next;
            }

            // fills attached to original nodes
            while (fill < raw.fill_nodes.size() &&
                   raw.times[static_cast<std::size_t>(raw.fill_nodes[fill])] == t) {
                const double pi = reduced ? reduced_posted[fill] : raw.posted[fill];
                const Point yf = point_from(raw.factor, static_cast<std::size_t>(raw.fill_nodes[fill]),
                                            raw.dim);
                cost += power_cost(problem.costs.gamma(yf), pi, p);
                x -= sign * pi;
                ++fill;
            }
            positions->push_back(sign * x);
        }
        return cost;
    };

    out.raw_cost = eval_path(false, &out.raw_position);
    out.reduced_cost = eval_path(true, &out.reduced_position);

    out.reduced_monotone = true;
    for (std::size_t r = 1; r < out.reduced_position.size(); ++r) {
        if (std::abs(out.reduced_position[r]) >
            std::abs(out.reduced_position[r - 1]) + 1e-12 * (1.0 + std::abs(raw.x0)))
            out.reduced_monotone = false;
    }
    return out;
}

}  // namespace liq
