#include "liq/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace liq {

double TransformedSurface::interpolate(double reversed_t, const Point& y) const {
    const auto& tn = grid.time.nodes;
    if (reversed_t < tn.front() || reversed_t > tn.back())
        throw std::domain_error("TransformedSurface: reversed time outside mesh");
    const auto st = grid.space.interpolation(y);
    int j = grid.time.index_at_or_below(reversed_t);
    if (j == static_cast<int>(tn.size()) - 1) --j;
    const double t0 = tn[static_cast<std::size_t>(j)];
    const double t1 = tn[static_cast<std::size_t>(j) + 1];
    const double w = (reversed_t - t0) / (t1 - t0);
    double u0 = 0.0, u1 = 0.0;
    for (int c = 0; c < st.corners; ++c) {
        const auto sc = static_cast<std::size_t>(c);
        u0 += st.weight[sc] * at(j, st.index[sc]);
        u1 += st.weight[sc] * at(j + 1, st.index[sc]);
    }
    return (1.0 - w) * u0 + w * u1;
}

double ValueSurface::eta_at(const Point& y) const {
    const auto st = u.grid.space.interpolation(y);
    double e = 0.0;
    for (int c = 0; c < st.corners; ++c)
        e += st.weight[static_cast<std::size_t>(c)] *
             eta_nodes[static_cast<std::size_t>(st.index[static_cast<std::size_t>(c)])];
    return e;
}

double ValueSurface::value(double t, const Point& y) const {
    if (!(t >= 0.0 && t < horizon))
        throw std::domain_error("ValueSurface: v is defined on [0, T) only");
    const double tau = horizon - t;
    const double eta = eta_at(y);
    const double root = std::pow(tau, 1.0 / beta);

    // below the first positive mesh level the two-term asymptotic is the
    // representation; interpolating toward u(0) = 0 would add nothing
    const double first = u.grid.time.nodes[1];
    double corr = 0.0;
    if (tau >= first) corr = u.interpolate(tau, y) / (tau * root);
    const double v = eta / root + corr;
    return v < 0.0 ? 0.0 : v;
}

double ValueSurface::deviation(int time_index, long space_index) const {
    const double t = u.grid.time.nodes[static_cast<std::size_t>(time_index)];
    if (t == 0.0) return 0.0;
    return std::abs(u.at(time_index, space_index)) / t;
}

}  // namespace liq
