#include "liq/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "generator.hpp"
#include "liq/stats.hpp"

namespace liq {

namespace {

// explicit part of the step: eval_f with the lagged -theta*u removed (that
// piece is folded into the implicit operator). The lagged argument is clamped
// into the growth band so accepted-slack roundoff never trips eval_f.
double lagged_rhs(const hjb::LocalCosts& c, double l_eta, double t, double u_lagged,
                  double series_tol) {
    const double cap = t * c.eta;
    const double w = std::clamp(u_lagged, -cap, cap);
    return hjb::eval_f(c, l_eta, t, w, series_tol) + c.theta * w;
}

struct GrowthViolation {
    bool violated = false;
    long node = -1;
    double value = 0.0;
    double bound = 0.0;
};

GrowthViolation check_growth(const Eigen::VectorXd& u, const std::vector<double>& eta, double t,
                             double slack) {
    GrowthViolation gv;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double bound = t * eta[static_cast<std::size_t>(i)];
        if (std::abs(u[i]) > bound * (1.0 + slack) + 1e-300) {
            gv.violated = true;
            gv.node = i;
            gv.value = u[i];
            gv.bound = bound;
            return gv;
        }
    }
    return gv;
}

class TransformedSolver {
public:
    TransformedSolver(const LiquidationProblem& problem, const Grid& grid,
                      const SolveOptions& options)
        : problem_(problem),
          grid_(grid),
          options_(options),
          gen_(detail::assemble_generator(problem, grid.space)),
          stepper_(gen_.L, problem.costs.theta) {}

    TransformedSurface run() {
        const long nspace = grid_.space.size();
        const auto& tn = grid_.time.nodes;

        TransformedSurface surf;
        surf.grid = grid_;
        surf.values.assign(tn.size() * static_cast<std::size_t>(nspace), 0.0);

        Eigen::VectorXd u = Eigen::VectorXd::Zero(nspace);
        for (std::size_t j = 1; j < tn.size(); ++j) {
            advance(u, tn[j - 1], tn[j], 0);
            std::copy(u.data(), u.data() + nspace,
                      surf.values.begin() + static_cast<std::ptrdiff_t>(j * static_cast<std::size_t>(nspace)));
        }
        return surf;
    }

private:
    void advance(Eigen::VectorXd& u, double ta, double tb, int depth) {
        const long nspace = grid_.space.size();
        const double dt = tb - ta;
        Eigen::VectorXd rhs(nspace);
        Eigen::VectorXd next(nspace);

        for (long i = 0; i < nspace; ++i) {
            const auto si = static_cast<std::size_t>(i);
            rhs[i] = u[i] + dt * lagged_rhs(gen_.costs[si], gen_.l_eta[si], tb, u[i],
                                            options_.series_tol);
        }
        stepper_.solve(dt, rhs, next);

        if (options_.corrector) {
            // trapezoid sweep over the lagged part, evaluated at the predictor;
            // the generator and -theta u stay implicit
            for (long i = 0; i < nspace; ++i) {
                const auto si = static_cast<std::size_t>(i);
                const double g0 =
                    lagged_rhs(gen_.costs[si], gen_.l_eta[si], ta, u[i], options_.series_tol);
                const double g1 =
                    lagged_rhs(gen_.costs[si], gen_.l_eta[si], tb, next[i], options_.series_tol);
                rhs[i] = u[i] + 0.5 * dt * (g0 + g1);
            }
            stepper_.solve(dt, rhs, next);
        }

        const GrowthViolation gv = check_growth(next, gen_.eta, tb, options_.growth_slack);
        if (!gv.violated) {
            u.swap(next);
            return;
        }
        if (depth >= options_.max_step_halvings) {
            const Point y = grid_.space.node(gv.node);
            std::ostringstream os;
            os << "solve_u: growth condition |u| <= t*eta still violated at reversed time " << tb
               << ", node (";
            for (int a = 0; a < y.dim; ++a) os << (a ? ", " : "") << y[a];
            os << "), |u| = " << std::abs(gv.value) << " > " << gv.bound
               << " after " << depth << " halvings; the domain box or grid is likely "
               << "misconfigured for this problem";
            throw SolveError(os.str());
        }
        const double mid = 0.5 * (ta + tb);
        advance(u, ta, mid, depth + 1);
        advance(u, mid, tb, depth + 1);
    }

    const LiquidationProblem& problem_;
    const Grid& grid_;
    SolveOptions options_;
    detail::DiscreteGenerator gen_;
    detail::ImplicitStepper stepper_;
};

}  // namespace

TransformedSurface solve_u(const LiquidationProblem& problem, const Grid& grid,
                           const SolveOptions& options) {
    if (std::abs(grid.time.horizon() - problem.horizon) > 1e-12 * problem.horizon)
        throw std::invalid_argument("solve_u: grid horizon does not match problem horizon");
    TransformedSolver solver(problem, grid, options);
    return solver.run();
}

ValueSurface solve_v(const LiquidationProblem& problem, const Grid& grid,
                     const SolveOptions& options) {
    ValueSurface vs;
    vs.u = solve_u(problem, grid, options);
    vs.beta = problem.costs.beta();
    vs.horizon = problem.horizon;
    const long nspace = grid.space.size();
    vs.eta_nodes.resize(static_cast<std::size_t>(nspace));
    for (long i = 0; i < nspace; ++i)
        vs.eta_nodes[static_cast<std::size_t>(i)] = problem.costs.eta(grid.space.node(i));
    return vs;
}

ContractionCertificate contraction_certificate(const LiquidationProblem& problem,
                                               const Grid& grid) {
    const auto gen = detail::assemble_generator(problem, grid.space);
    const double dts[] = {1.0, 0.5, 0.25, 0.1, 0.01, 1e-3};
    ContractionCertificate cert;
    cert.M = detail::semigroup_sup_norm(gen, dts);

    const CostModel& c = problem.costs;
    cert.R = 2.0 * cert.M * (c.gen_eta_sup + c.lambda_sup + c.theta * c.eta_sup);
    cert.L = c.p * (std::pow(2.0, c.beta()) - 1.0) / (c.kappa0 * c.kappa0) * cert.R * c.eta_sup +
             c.theta;
    cert.degenerate_R = (cert.R == 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    const double first = cert.degenerate_R ? inf : c.kappa0 / cert.R;
    const double ml = cert.M * cert.L;
    const double second = (ml == 0.0) ? inf : 1.0 / (2.0 * ml);
    cert.delta = std::min({first, second, 1.0});
    return cert;
}

ContractionCertificate contraction_certificate(const LiquidationProblem& problem) {
    return contraction_certificate(problem, make_grid(problem, GridSpec{}));
}

double weighted_norm(const TransformedSurface& u, double delta) {
    const auto& tn = u.grid.time.nodes;
    if (delta > tn.back() * (1.0 + 1e-12))
        throw std::invalid_argument("weighted_norm: delta exceeds the mesh horizon");
    const long nspace = u.grid.space.size();
    double sup = 0.0;
    for (std::size_t j = 1; j < tn.size(); ++j) {
        const double t = tn[j];
        if (t > delta * (1.0 + 1e-12)) break;
        double level = 0.0;
        for (long i = 0; i < nspace; ++i) level = std::max(level, std::abs(u.at(static_cast<int>(j), i)));
        sup = std::max(sup, level / (t * t));
    }
    return sup;
}

PicardResult picard_run(const LiquidationProblem& problem, const Grid& grid, double delta,
                        int n_iter, const SolveOptions& options) {
    const ContractionCertificate cert = contraction_certificate(problem, grid);
    if (delta > cert.delta * (1.0 + 1e-12))
        throw std::invalid_argument("picard_run: delta exceeds the certified contraction horizon");
    if (delta > grid.time.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("picard_run: delta exceeds the grid horizon");
    if (n_iter < 0) throw std::invalid_argument("picard_run: n_iter must be nonnegative");

    // restrict the mesh to [0, delta], appending delta itself if absent
    Grid sub = grid;
    sub.time.nodes.clear();
    for (double t : grid.time.nodes) {
        if (t <= delta * (1.0 + 1e-12)) sub.time.nodes.push_back(std::min(t, delta));
    }
    if (sub.time.nodes.back() < delta * (1.0 - 1e-12)) sub.time.nodes.push_back(delta);

    const auto gen = detail::assemble_generator(problem, sub.space);
    detail::ImplicitStepper semigroup(gen.L, 0.0);  // pure generator; theta stays inside f
    const long nspace = sub.space.size();
    const auto& tn = sub.time.nodes;

    PicardResult result;
    result.ball_radius = cert.R;

    TransformedSurface zero;
    zero.grid = sub;
    zero.values.assign(tn.size() * static_cast<std::size_t>(nspace), 0.0);
    result.iterates.push_back(zero);
    result.ball_norms.push_back(0.0);

    for (int m = 0; m < n_iter; ++m) {
        const TransformedSurface& prev = result.iterates.back();
        TransformedSurface next = zero;

        Eigen::VectorXd w = Eigen::VectorXd::Zero(nspace);
        Eigen::VectorXd rhs(nspace), solved(nspace);
        for (std::size_t j = 1; j < tn.size(); ++j) {
            const double t = tn[j];
            const double dt = t - tn[j - 1];
            for (long i = 0; i < nspace; ++i) {
                const auto si = static_cast<std::size_t>(i);
                // clamp the lagged iterate into the growth band; iterates in
                // the R-ball satisfy it, and an excursion is flagged below
                const double cap = t * gen.eta[si];
                const double uprev = std::clamp(prev.at(static_cast<int>(j), i), -cap, cap);
                rhs[i] = w[i] + dt * hjb::eval_f(gen.costs[si], gen.l_eta[si], t, uprev,
                                                 options.series_tol);
            }
            semigroup.solve(dt, rhs, solved);
            w.swap(solved);
            std::copy(w.data(), w.data() + nspace,
                      next.values.begin() + static_cast<std::ptrdiff_t>(j * static_cast<std::size_t>(nspace)));
        }

        TransformedSurface diff = next;
        for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= prev.values[k];
        result.distances.push_back(weighted_norm(diff, delta));
        if (result.distances.size() >= 2) {
            const double prev_d = result.distances[result.distances.size() - 2];
            if (prev_d > 0.0) result.factors.push_back(result.distances.back() / prev_d);
        }

        const double ball = weighted_norm(next, delta);
        result.ball_norms.push_back(ball);
        if (!cert.degenerate_R && ball > cert.R * (1.0 + 1e-9)) result.left_ball = true;

        result.iterates.push_back(std::move(next));
    }
    return result;
}

AsymptoticsReport check_asymptotics(const ValueSurface& surface, int n_taus,
                                    double interior_frac, int first_octave) {
    const auto& tn = surface.u.grid.time.nodes;
    const long nspace = surface.u.grid.space.size();
    const double horizon = tn.back();

    AsymptoticsReport report;
    int last_index = -1;
    for (int k = first_octave; k < first_octave + n_taus; ++k) {
        const double target = horizon * std::pow(2.0, -k);
        int j = surface.u.grid.time.index_at_or_below(target);
        if (j < 1) break;
        if (j == last_index) continue;
        last_index = j;
        const double tau = tn[static_cast<std::size_t>(j)];

        double dev = 0.0;
        for (long i = 0; i < nspace; ++i) {
            if (!surface.u.grid.space.is_interior(i, interior_frac)) continue;
            dev = std::max(dev, surface.deviation(j, i));
        }
        report.taus.push_back(tau);
        report.deviations.push_back(dev);
        report.ratios.push_back(dev / tau);
    }

    double eta_scale = 0.0;
    for (double e : surface.eta_nodes) eta_scale = std::max(eta_scale, std::abs(e));
    report.exact_leading = true;
    for (double d : report.deviations)
        if (d > 1e-13 * std::max(1.0, eta_scale)) report.exact_leading = false;

    if (report.exact_leading || report.taus.size() < 2) {
        report.fitted_slope = std::numeric_limits<double>::infinity();
        report.ratio_bounded = true;
        report.max_ratio = report.ratios.empty()
                               ? 0.0
                               : *std::max_element(report.ratios.begin(), report.ratios.end());
        return report;
    }

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < report.taus.size(); ++k) {
        if (report.deviations[k] <= 0.0) continue;
        lx.push_back(std::log(report.taus[k]));
        ly.push_back(std::log(report.deviations[k]));
    }
    report.fitted_slope =
        (lx.size() >= 2) ? stats::fit_line(lx, ly).slope : std::numeric_limits<double>::infinity();
    report.max_ratio = *std::max_element(report.ratios.begin(), report.ratios.end());
    report.ratio_bounded = report.fitted_slope >= 0.9;
    return report;
}

}  // namespace liq
