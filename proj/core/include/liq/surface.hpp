#pragma once

#include <vector>

#include "liq/grid.hpp"

namespace liq {

// Grid samples of the regularized unknown u in reversed time. u(0,.) = 0 and
// |u(t,y)| <= t * eta(y) at every accepted node.
struct TransformedSurface {
    Grid grid;
    std::vector<double> values;  // time-major: values[j * nspace + i]

    double at(int time_index, long space_index) const {
        return values[static_cast<std::size_t>(time_index) * static_cast<std::size_t>(grid.space.size()) +
                      static_cast<std::size_t>(space_index)];
    }

    // linear in reversed time between mesh levels, multilinear in y
    double interpolate(double reversed_t, const Point& y) const;
};

// Queryable value surface v(t, y) on forward time [0, T). The singular factor
// is carried analytically: v = eta / tau^(1/beta) + u / tau^(1+1/beta) with
// tau = T - t, so only the regular parts are ever interpolated.
struct ValueSurface {
    TransformedSurface u;
    std::vector<double> eta_nodes;  // eta sampled on the space grid
    double beta = 1.0;
    double horizon = 1.0;

    // v(t, y); throws std::domain_error for t outside [0, T)
    double value(double t, const Point& y) const;
    double eta_at(const Point& y) const;

    // |u| at a grid node divided by reversed time (the deviation of
    // tau^(1/beta) v from eta); used by the asymptotics check
    double deviation(int time_index, long space_index) const;
};

}  // namespace liq
