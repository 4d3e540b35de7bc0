#include "liq/hjb.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace liq::hjb {

namespace {

// (a^beta + b^beta)^(1/beta) for a, b >= 0, rescaled so that neither power
// under- nor overflows when a and b differ by many orders of magnitude.
double power_mean_sum(double a, double b, double beta) {
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    const double ra = a / m, rb = b / m;
    return m * std::pow(std::pow(ra, beta) + std::pow(rb, beta), 1.0 / beta);
}

}  // namespace

LocalCosts sample_costs(const CostModel& costs, const Point& y) {
    return LocalCosts{costs.eta(y), costs.gamma(y), costs.lambda(y),
                      costs.theta,  costs.p,        costs.beta()};
}

double eval_F(const LocalCosts& c, double v) {
    if (v < 0.0) throw std::domain_error("eval_F: v must be nonnegative");
    double out = c.lambda - std::pow(v, c.beta + 1.0) / (c.beta * std::pow(c.eta, c.beta));
    if (c.theta > 0.0) {
        if (c.gamma > 0.0 && v > 0.0) {
            const double denom = power_mean_sum(c.gamma, v, c.beta);
            if (denom > 0.0) out += c.theta * c.gamma * v / denom;
            // denom == 0 only if both arguments underflowed; the limit is 0
        }
        out -= c.theta * v;
    }
    return out;
}

double eval_F(const CostModel& costs, const Point& y, double v) {
    return eval_F(sample_costs(costs, y), v);
}

double gen_binom(double beta, int k) {
    if (k < 0) throw std::domain_error("gen_binom: k must be nonnegative");
    double c = 1.0;
    for (int j = 0; j < k; ++j) c *= (beta + 1.0 - static_cast<double>(j)) / (j + 1.0);
    return c;
}

double eval_f(const LocalCosts& c, double op_l_eta, double t, double u, double series_tol,
              SeriesInfo* info) {
    if (!(series_tol > 0.0)) throw std::invalid_argument("eval_f: series_tol must be positive");
    if (t < 0.0) throw std::domain_error("eval_f: reversed time must be nonnegative");
    if (info) *info = SeriesInfo{};

    const double teta = t * c.eta;
    // growth condition |u| <= t eta, with a roundoff allowance
    if (std::abs(u) > teta * (1.0 + 1e-12))
        throw std::domain_error("eval_f: growth condition |u| <= t*eta violated");
    if (t == 0.0) return 0.0;  // u(0) = 0; limit of all terms

    const double tp = std::pow(t, c.p);
    double out = t * op_l_eta + tp * c.lambda;

    // - (eta/beta) * sum_{k>=2} C(beta+1, k) z^k, z = u/(t eta), |z| <= 1.
    // For p = 2 the series is the single exact k = 2 term. Otherwise the
    // coefficient magnitudes decrease from k > beta+2 on, so the discarded
    // tail is bounded by the geometric series with ratio |z|.
    const double z = std::max(-1.0, std::min(1.0, u / teta));
    if (z != 0.0) {
        if (c.p == 2.0) {
            out -= c.eta * z * z;  // beta = 1, C(2,2) = 1, higher terms vanish
            if (info) info->terms = 1;
        } else {
            double series = 0.0;
            double coeff = c.beta + 1.0;  // running C(beta+1, k), seeded at k = 1
            double zk = z;                // z^k
            const double az = std::abs(z);
            int terms = 0;
            bool capped = false;
            double tail = 0.0;
            for (int k = 2;; ++k) {
                coeff *= (c.beta + 2.0 - static_cast<double>(k)) / static_cast<double>(k);
                if (coeff == 0.0) break;  // integer beta+1: series terminates
                zk *= z;
                series += coeff * zk;
                ++terms;
                const double head = std::abs(coeff * zk);
                if (az < 1.0) {
                    tail = head * az / (1.0 - az);
                    if (tail < series_tol) break;
                }
                if (terms >= kSeriesTermCap) {
                    // |z| at (or within roundoff of) 1: coefficients still decay
                    // like k^-(beta+2), so flag the truncation instead of spinning
                    capped = true;
                    tail = head;
                    break;
                }
            }
            if (info) {
                info->terms = terms;
                info->tail_bound = tail;
                info->capped = capped;
            }
            out -= c.eta / c.beta * series;
        }
    }

    if (c.theta > 0.0) {
        const double w = teta + u;  // >= 0 under the growth condition
        const double tpg = tp * c.gamma;
        if (c.gamma > 0.0 && w > 0.0) {
            const double denom = power_mean_sum(tpg, std::abs(w), c.beta);
            if (denom > 0.0) out += c.theta * tpg * w / denom;
        }
        out -= c.theta * w;
    }
    return out;
}

double eval_f(const CostModel& costs, double op_l_eta, double t, double u, const Point& y,
              double series_tol, SeriesInfo* info) {
    return eval_f(sample_costs(costs, y), op_l_eta, t, u, series_tol, info);
}

double reconstruct_v(double eta_y, double tau, double u, double beta) {
    if (!(tau > 0.0))
        throw std::domain_error("reconstruct_v: tau must be positive (singular at the deadline)");
    const double root = std::pow(tau, 1.0 / beta);
    return eta_y / root + u / (tau * root);
}

FeedbackPair feedback(const LocalCosts& c, double v, double x) {
    if (v < 0.0) throw std::domain_error("feedback: v must be nonnegative");
    if (x == 0.0) return {0.0, 0.0};
    FeedbackPair fb;
    fb.xi_rate = std::pow(v / c.eta, c.beta) * x;
    if (v == 0.0) {
        fb.pi_size = 0.0;
    } else if (c.gamma <= 0.0) {
        fb.pi_size = x;
    } else {
        // v^beta/(gamma^beta + v^beta) computed via the scaled ratio so the
        // removable singularity near underflow resolves to its algebraic limit
        const double r = std::pow(c.gamma / v, c.beta);
        fb.pi_size = x / (1.0 + r);
    }
    return fb;
}

FeedbackPair feedback(const CostModel& costs, const Point& y, double v, double x) {
    return feedback(sample_costs(costs, y), v, x);
}

}  // namespace liq::hjb
