#pragma once

// Test-only oracles, written independently of the library code paths they
// check: an adaptive Cash-Karp integrator, the closed forms of the
// constant-coefficient benchmarks, and the reversed-time scalar reduction of
// the value equation started on the singular branch.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace liq::oracle {

// Adaptive RK45 (Cash-Karp) for a scalar ODE y' = f(t, y).
inline double rk45(const std::function<double(double, double)>& f, double t0, double t1, double y0,
                   double rtol = 1e-12, double atol = 1e-14) {
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static constexpr double b21 = 0.2;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                            d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                            d6 = c6 - 0.25;

    double t = t0, y = y0;
    double h = (t1 - t0) * 1e-4;
    int guard = 0;
    while (t < t1) {
        if (++guard > 2000000) throw std::runtime_error("rk45: step count exceeded");
        if (t + h > t1) h = t1 - t;
        const double k1 = f(t, y);
        const double k2 = f(t + a2 * h, y + h * b21 * k1);
        const double k3 = f(t + a3 * h, y + h * (b31 * k1 + b32 * k2));
        const double k4 = f(t + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
        const double k5 = f(t + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
        const double k6 =
            f(t + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
        const double y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
        const double err = std::abs(h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6));
        const double scale = atol + rtol * std::max(std::abs(y), std::abs(y5));
        if (err <= scale || h <= (t1 - t0) * 1e-14) {
            t += h;
            y = y5;
        }
        const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, grow));
    }
    return y;
}

struct ConstantCoefficients {
    double eta = 1.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double theta = 0.0;
    double p = 2.0;
    double beta() const { return 1.0 / (p - 1.0); }
};

// The scalar nonlinearity, written straight from its four-term definition.
inline double F_scalar(const ConstantCoefficients& c, double v) {
    const double beta = c.beta();
    double out = c.lambda - std::pow(std::abs(v), beta + 1.0) / (beta * std::pow(c.eta, beta));
    if (c.theta > 0.0) {
        if (c.gamma > 0.0 && v > 0.0)
            out += c.theta * c.gamma * v /
                   std::pow(std::pow(c.gamma, beta) + std::pow(std::abs(v), beta), 1.0 / beta);
        out -= c.theta * v;
    }
    return out;
}

// v at time-to-deadline tau, integrating the reversed-time reduction
// w' = F(w) outward from the singular branch. The singular branch is the
// attractor, so the two-term seed error at tau0 decays like (tau0/tau)^p.
inline double v_constant_coefficients(const ConstantCoefficients& c, double tau,
                                      double tau0 = 1e-6) {
    const double seed = c.eta / std::pow(tau0, 1.0 / c.beta());
    if (tau <= tau0) throw std::invalid_argument("v oracle: tau too small");
    return rk45([&](double, double w) { return F_scalar(c, w); }, tau0, tau, seed, 1e-12, 1e-12);
}

inline double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace liq::oracle
