#pragma once

#include "liq/model.hpp"

namespace liq::hjb {

// Scalar coefficient bundle at one factor state; lets the PDE stepper reuse
// sampled coefficients instead of re-evaluating fields per node per step.
struct LocalCosts {
    double eta;
    double gamma;
    double lambda;
    double theta;
    double p;
    double beta;
};

LocalCosts sample_costs(const CostModel& costs, const Point& y);

// Nonlinearity of the value PDE:
//   F(y, v) = lambda - v^(beta+1) / (beta eta^beta)
//             + theta gamma v / (gamma^beta + v^beta)^(1/beta) - theta v.
// The dark-pool quotient is extended by its algebraic limit where
// gamma^beta + v^beta vanishes. Requires v >= 0.
double eval_F(const LocalCosts& c, double v);
double eval_F(const CostModel& costs, const Point& y, double v);

// Generalized binomial coefficient C(beta+1, k).
double gen_binom(double beta, int k);

struct SeriesInfo {
    int terms = 0;          // series terms actually summed (k >= 2)
    double tail_bound = 0;  // geometric bound on the discarded tail
    bool capped = false;    // hit the term cap near ratio 1
};

inline constexpr int kSeriesTermCap = 10000;

// Nonlinearity of the transformed equation in reversed time:
//   f(t,u) = t Leta + t^p lambda - (eta/beta) sum_{k>=2} C(beta+1,k) (u/(t eta))^k
//            + theta t^p gamma (t eta + u) / ((t^p gamma)^beta + |t eta + u|^beta)^(1/beta)
//            - theta (t eta + u).
// op_l_eta is the caller's evaluation of (L eta)(y); the discrete generator
// owns that choice. Requires |u| <= t eta (the series diverges otherwise) and
// throws std::domain_error on violation. f(0, 0) = 0 by continuity.
double eval_f(const LocalCosts& c, double op_l_eta, double t, double u, double series_tol,
              SeriesInfo* info = nullptr);
double eval_f(const CostModel& costs, double op_l_eta, double t, double u, const Point& y,
              double series_tol, SeriesInfo* info = nullptr);

// v = eta / tau^(1/beta) + u / tau^(1+1/beta), tau = T - t > 0 the time to
// the deadline. Throws std::domain_error at tau <= 0.
double reconstruct_v(double eta_y, double tau, double u, double beta);

struct FeedbackPair {
    double xi_rate;  // primary-market trading rate, shares per unit time
    double pi_size;  // dark-pool posting, shares
};

// Optimal feedback maps: xi = (v/eta)^beta x, pi = v^beta/(gamma^beta+v^beta) x,
// with pi = x when gamma = 0 and v > 0 (free dark-pool fills take everything).
FeedbackPair feedback(const LocalCosts& c, double v, double x);
FeedbackPair feedback(const CostModel& costs, const Point& y, double v, double x);

}  // namespace liq::hjb
