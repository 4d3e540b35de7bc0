#include <doctest.h>

#include <cmath>

#include "liq/pde.hpp"
#include "oracles.hpp"
#include "problems.hpp"

using namespace liq;

namespace {

Grid grid_for(const LiquidationProblem& p, int nt = 1024, int ny = 21) {
    return make_grid(p, GridSpec{nt, ny, 0.5});
}

}  // namespace

TEST_CASE("time mesh structure") {
    const TimeMesh mesh = TimeMesh::geometric(1.0, 64, 0.5);
    CHECK(mesh.nodes.front() == 0.0);
    CHECK(mesh.nodes.back() == 1.0);
    for (std::size_t j = 1; j < mesh.nodes.size(); ++j)
        CHECK(mesh.nodes[j] > mesh.nodes[j - 1]);
    // geometric cluster inside the first uniform cell
    CHECK(mesh.nodes[1] < 1.0 / 64.0 * 0.5);
    CHECK_THROWS_AS(TimeMesh::geometric(1.0, 64, 1.5), std::invalid_argument);
}

TEST_CASE("constant problem: u stays exactly zero, v = 1/(T - t)") {
    const LiquidationProblem p = testprob::constant_problem();
    const ValueSurface vs = solve_v(p, grid_for(p));
    for (double u : vs.u.values) CHECK(u == 0.0);
    for (double t : {0.0, 0.25, 0.5, 0.9, 0.999}) {
        const double v = vs.value(t, Point::of(0.3));
        CHECK(v == doctest::Approx(1.0 / (1.0 - t)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(vs.value(1.0, Point::of(0.0)), std::domain_error);
}

TEST_CASE("coth problem matches the closed form") {
    const LiquidationProblem p = testprob::coth_problem();
    const ValueSurface vs = solve_v(p, grid_for(p));
    // v(0, y) = coth(1), u(t) = t^2 (coth(t) - 1/t)
    CHECK(vs.value(0.0, Point::of(0.0)) ==
          doctest::Approx(oracle::coth(1.0)).epsilon(2e-4));
    const double u_at_1 = vs.u.interpolate(1.0, Point::of(0.0));
    CHECK(u_at_1 == doctest::Approx(oracle::coth(1.0) - 1.0).epsilon(2e-4));

    // spatial constancy: every node at a given level equals the scalar solution
    const long nspace = vs.u.grid.space.size();
    const int last = static_cast<int>(vs.u.grid.time.nodes.size()) - 1;
    for (long i = 1; i < nspace; ++i)
        CHECK(vs.u.at(last, i) == doctest::Approx(vs.u.at(last, 0)).epsilon(1e-12));
}

TEST_CASE("coth problem: reversed-time ODE oracle agrees with the closed form") {
    // validate the oracle itself before it judges anything else
    oracle::ConstantCoefficients c;
    c.lambda = 1.0;
    CHECK(oracle::v_constant_coefficients(c, 1.0) ==
          doctest::Approx(oracle::coth(1.0)).epsilon(1e-9));
    CHECK(oracle::v_constant_coefficients(c, 0.25) ==
          doctest::Approx(oracle::coth(0.25)).epsilon(1e-9));
}

TEST_CASE("dark-pool problem against the ODE oracle") {
    const LiquidationProblem p = testprob::darkpool_problem();
    const ValueSurface vs = solve_v(p, grid_for(p, 2048));
    oracle::ConstantCoefficients c;
    c.lambda = 1.0;
    c.gamma = 1.0;
    c.theta = 2.0;
    for (double t : {0.0, 0.3, 0.6}) {
        const double expect = oracle::v_constant_coefficients(c, 1.0 - t);
        CHECK(vs.value(t, Point::of(0.0)) == doctest::Approx(expect).epsilon(5e-4));
    }
}

TEST_CASE("growth condition and zero initial row hold at every node") {
    for (const LiquidationProblem& p :
         {testprob::ou_lambda_problem(), testprob::logistic_eta_problem()}) {
        const TransformedSurface u = solve_u(p, grid_for(p, 512));
        const long nspace = u.grid.space.size();
        for (long i = 0; i < nspace; ++i) CHECK(u.at(0, i) == 0.0);
        for (std::size_t j = 1; j < u.grid.time.nodes.size(); ++j) {
            const double t = u.grid.time.nodes[j];
            for (long i = 0; i < nspace; ++i) {
                const double eta = p.costs.eta(u.grid.space.node(i));
                CHECK(std::abs(u.at(static_cast<int>(j), i)) <= t * eta * (1.0 + 1e-8));
            }
        }
    }
}

TEST_CASE("pointwise ordering in lambda") {
    ProblemInputs lo = testprob::base_1d();
    lo.costs.lambda = ScalarField::constant(0.5);
    ProblemInputs hi = lo;
    hi.costs.lambda = ScalarField::constant(1.5);
    const Grid grid = grid_for(build_problem(lo), 512);
    const ValueSurface v1 = solve_v(build_problem(lo), grid);
    const ValueSurface v2 = solve_v(build_problem(hi), grid);
    for (std::size_t j = 1; j < grid.time.nodes.size(); ++j)
        for (long i = 0; i < grid.space.size(); ++i)
            CHECK(v1.u.at(static_cast<int>(j), i) <= v2.u.at(static_cast<int>(j), i) + 1e-12);
}

TEST_CASE("deterministic envelope sandwich at grid nodes (coth problem)") {
    // lower = 1/tau, upper = 1/tau + tau/3 enclose coth(tau). The lower
    // margin is tau/3; the upper margin is only tau^3/45 and falls below the
    // u-discretization error for very small tau, so the upper side is
    // asserted on tau >= 0.1.
    const LiquidationProblem p = testprob::coth_problem();
    const ValueSurface vs = solve_v(p, grid_for(p));
    for (std::size_t j = 1; j < vs.u.grid.time.nodes.size(); ++j) {
        const double tau = vs.u.grid.time.nodes[j];
        const double v = vs.value(p.horizon - tau, Point::of(0.0));
        CHECK(v >= 1.0 / tau - 1e-9);
        if (tau >= 0.1) CHECK(v <= 1.0 / tau + tau / 3.0 + 1e-9);
    }
}

TEST_CASE("grid refinement: observed time order >= 0.8 on the coth oracle") {
    const LiquidationProblem p = testprob::coth_problem();
    const double truth = oracle::coth(1.0);
    double errs[2];
    const int nts[2] = {256, 512};
    for (int k = 0; k < 2; ++k) {
        const ValueSurface vs = solve_v(p, grid_for(p, nts[k], k == 0 ? 11 : 21));
        errs[k] = std::abs(vs.value(0.0, Point::of(0.0)) - truth);
    }
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order >= 0.8);
}

TEST_CASE("weighted norm: zero, weight cancellation, sup location") {
    const LiquidationProblem p = testprob::constant_problem();
    Grid grid = grid_for(p, 64);
    TransformedSurface u;
    u.grid = grid;
    const long nspace = grid.space.size();
    u.values.assign(grid.time.nodes.size() * static_cast<std::size_t>(nspace), 0.0);
    CHECK(weighted_norm(u, 1.0) == 0.0);

    for (std::size_t j = 0; j < grid.time.nodes.size(); ++j) {
        const double t = grid.time.nodes[j];
        for (long i = 0; i < nspace; ++i)
            u.values[j * static_cast<std::size_t>(nspace) + static_cast<std::size_t>(i)] = t * t;
    }
    CHECK(weighted_norm(u, 1.0) == doctest::Approx(1.0));
    CHECK(weighted_norm(u, 0.25) == doctest::Approx(1.0));

    for (std::size_t j = 0; j < grid.time.nodes.size(); ++j) {
        const double t = grid.time.nodes[j];
        for (long i = 0; i < nspace; ++i)
            u.values[j * static_cast<std::size_t>(nspace) + static_cast<std::size_t>(i)] =
                t * t * t;
    }
    // sup over (0, 1/2] of t^3 / t^2; the mesh contains t = 1/2 exactly
    CHECK(weighted_norm(u, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("asymptotics: exact leading term for the constant problem") {
    const LiquidationProblem p = testprob::constant_problem();
    const ValueSurface vs = solve_v(p, grid_for(p));
    const AsymptoticsReport rep = check_asymptotics(vs);
    CHECK(rep.exact_leading);
    for (double d : rep.deviations) CHECK(d == 0.0);
}

TEST_CASE("asymptotics: coth correction has slope about 2") {
    const LiquidationProblem p = testprob::coth_problem();
    const ValueSurface vs = solve_v(p, grid_for(p));
    const AsymptoticsReport rep = check_asymptotics(vs);
    CHECK_FALSE(rep.exact_leading);
    CHECK(rep.fitted_slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.fitted_slope >= 0.9);
    CHECK(rep.ratio_bounded);
    // e(tau) = tau^2/3 + O(tau^4)
    CHECK(rep.deviations.front() ==
          doctest::Approx(rep.taus.front() * rep.taus.front() / 3.0).epsilon(0.02));
}

TEST_CASE("two-dimensional solve passes its own growth and asymptotics checks") {
    const LiquidationProblem p = testprob::two_dim_problem();
    const ValueSurface vs = solve_v(p, make_grid(p, GridSpec{256, 15, 0.5}));
    const AsymptoticsReport rep = check_asymptotics(vs);
    CHECK_FALSE(rep.exact_leading);
    CHECK(rep.fitted_slope >= 0.9);
    CHECK(vs.value(0.0, Point::of(0.1, -0.2)) > 0.0);
}

TEST_CASE("correlated two-dimensional diffusion solves and stays ordered") {
    ProblemInputs in;
    in.horizon = 1.0;
    in.y0 = Point::of(0.0, 0.0);
    in.factor.dim = 2;
    in.factor.noise_dim = 2;
    in.factor.drift = {ScalarField::constant(0.0), ScalarField::constant(0.0)};
    // sigma sigma^T = [[1.09, 0.27], [0.27, 0.81]], eigenvalues ~ 0.63 / 1.27
    in.factor.sigma = MatrixField::constant(2, 2, {1.0, 0.3, 0.0, 0.9});
    in.factor.lipschitz_const = 1.0;
    in.factor.ellipticity_min = 0.6;
    in.factor.drift_sup = 0.0;
    in.factor.sigma_sup = 1.0;
    in.domain.dim = 2;
    in.domain.lo = Point::of(-3.0, -3.0);
    in.domain.hi = Point::of(3.0, 3.0);
    std::array<double, kMaxDim> w{};
    w[0] = 1.0;
    in.costs.eta = ScalarField::constant(1.0);
    in.costs.lambda = ScalarField::logistic_linear(0.2, 0.8, w, 0.0);
    in.costs.gamma = ScalarField::constant(0.0);
    in.costs.p = 2.0;
    in.costs.kappa0 = 1.0;
    in.validation_nodes_per_axis = 31;
    const LiquidationProblem p = build_problem(in);

    const ValueSurface vs = solve_v(p, make_grid(p, GridSpec{256, 15, 0.5}));
    const AsymptoticsReport rep = check_asymptotics(vs);
    CHECK(rep.fitted_slope >= 0.9);
    // deterministic envelope: 1/tau <= v <= 1/tau + tau sup(lambda) / 3
    for (double t : {0.25, 0.5, 0.75}) {
        const double tau = 1.0 - t;
        const double v = vs.value(t, Point::of(0.2, -0.4));
        CHECK(v >= 1.0 / tau - 1e-9);
        CHECK(v <= 1.0 / tau + tau * 1.0 / 3.0 + 1e-9);
    }
    // cross terms break row monotonicity; M is measured, not assumed
    const ContractionCertificate cert = contraction_certificate(p, make_grid(p, GridSpec{256, 15, 0.5}));
    CHECK(cert.M >= 1.0);
    CHECK(cert.delta > 0.0);
}

TEST_CASE("solver failure names the node when the box is misconfigured") {
    // eta varying by a factor 40 across the box: the correction genuinely
    // outgrows t*eta near the low-eta edge, so the solve must refuse
    ProblemInputs in = testprob::base_1d();
    std::array<double, kMaxDim> w{};
    w[0] = 1.0;
    in.costs.eta = ScalarField::logistic_linear(0.05, 2.0, w, 0.0);
    in.costs.kappa0 = 0.05;
    in.costs.lambda = ScalarField::constant(2.0);
    const LiquidationProblem p = build_problem(in);
    CHECK_THROWS_AS(solve_u(p, grid_for(p, 128, 11)), SolveError);
}
