#include <doctest.h>

#include <cmath>

#include "problems.hpp"

using namespace liq;

TEST_CASE("constant coefficients validate and derive beta") {
    const LiquidationProblem p = testprob::constant_problem();
    CHECK(p.costs.beta() == 1.0);
    CHECK(p.costs.eta_sup == 1.0);
    CHECK(p.costs.lambda_sup == 0.0);
    CHECK(p.costs.gen_eta_sup == 0.0);  // generator of a constant is exactly zero
}

TEST_CASE("p = 8/5 gives beta = 5/3") {
    ProblemInputs in = testprob::base_1d();
    in.costs.p = 1.6;
    const LiquidationProblem p = build_problem(in);
    CHECK(p.costs.beta() == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("eta dipping below kappa0 is rejected with a witness") {
    ProblemInputs in = testprob::base_1d();
    // max(y, 0) via a clipped affine ramp; zero at the origin
    std::array<double, kMaxDim> lin{};
    lin[0] = 1.0;
    in.costs.eta = ScalarField::affine(0.0, lin).clipped(0.0, 10.0, 1e-6);
    in.costs.kappa0 = 0.1;
    CHECK_THROWS_WITH_AS(build_problem(in),
                         doctest::Contains("eta >= kappa0"), ValidationError);
    try {
        build_problem(in);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("y = ") != std::string::npos);  // witness node named
    }
}

TEST_CASE("p <= 1 is rejected") {
    ProblemInputs in = testprob::base_1d();
    in.costs.p = 1.0;
    CHECK_THROWS_AS(build_problem(in), ValidationError);
}

TEST_CASE("degenerate diffusion fails the ellipticity check") {
    ProblemInputs in = testprob::base_1d();
    in.factor.sigma = MatrixField::constant(1, 1, {0.0});
    in.factor.sigma_sup = 0.0;
    CHECK_THROWS_WITH_AS(build_problem(in), doctest::Contains("ellipticity"), ValidationError);
}

TEST_CASE("negative lambda is rejected") {
    ProblemInputs in = testprob::base_1d();
    in.costs.lambda = ScalarField::constant(-0.5);
    CHECK_THROWS_AS(build_problem(in), ValidationError);
}

TEST_CASE("y0 outside the truncation box is rejected") {
    ProblemInputs in = testprob::base_1d();
    in.y0 = Point::of(9.0);
    CHECK_THROWS_AS(build_problem(in), ValidationError);
}

TEST_CASE("revalidation of a built problem is idempotent") {
    const LiquidationProblem p = testprob::ou_lambda_problem();
    CHECK_NOTHROW(revalidate(p));
    const LiquidationProblem q = testprob::logistic_eta_problem();
    CHECK_NOTHROW(revalidate(q));
    const LiquidationProblem r = testprob::two_dim_problem();
    CHECK_NOTHROW(revalidate(r));
}

TEST_CASE("softclip: clamp outside, identity inside, floor below") {
    CHECK(softclip(5.0, -1.0, 1.0, 0.1) == 1.0);
    CHECK(softclip(0.0, -1.0, 1.0, 0.1) == 0.0);
    CHECK(softclip(0.0, 0.1, 10.0, 0.05) == 0.1);  // y^2 at y = 0 clamps to the floor

    // C1 joints: value and slope continuous at band edges
    const double w = 0.25, cap = 1.0;
    const double eps = 1e-7;
    const double inside = softclip(cap - w - eps, -2.0, cap, w);
    CHECK(inside == cap - w - eps);
    const double slope_mid =
        (softclip(cap, -2.0, cap, w) - softclip(cap - eps, -2.0, cap, w)) / eps;
    CHECK(slope_mid == doctest::Approx(0.5).epsilon(1e-4));  // quadratic blend half-slope at cap
    CHECK(softclip(cap + w, -2.0, cap, w) == cap);
}

TEST_CASE("clipped field is bounded and Lipschitz on a mesh") {
    std::array<double, kMaxDim> lin{};
    lin[0] = 3.0;
    const ScalarField raw = ScalarField::affine(0.0, lin);
    const ScalarField clipped = clip_coefficients(raw, -1.0, 1.0, 0.2);
    double prev = 0.0;
    bool first = true;
    const double h = 1e-3;
    double max_ratio = 0.0;
    for (double y = -2.0; y <= 2.0; y += h) {
        const double v = clipped(Point::of(y));
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
        if (!first) max_ratio = std::max(max_ratio, std::abs(v - prev) / h);
        prev = v;
        first = false;
    }
    CHECK(max_ratio <= 3.0 * (1.0 + 1e-6));  // no steeper than the raw slope
}

TEST_CASE("tabulated coefficient interpolates and clamps") {
    const ScalarField f = ScalarField::tabulated(0, {0.0, 1.0, 2.0}, {1.0, 3.0, 2.0});
    CHECK(f(Point::of(0.5)) == doctest::Approx(2.0));
    CHECK(f(Point::of(-1.0)) == 1.0);
    CHECK(f(Point::of(5.0)) == 2.0);
}
