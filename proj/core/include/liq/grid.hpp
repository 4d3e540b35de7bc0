#pragma once

#include <vector>

#include "liq/model.hpp"

namespace liq {

// Reversed-time mesh on [0, T]: a uniform mesh of n_uniform steps whose first
// cell is subdivided geometrically toward 0. The solver's initial condition
// sits at reversed time 0 (the deadline), where the nonlinearity is merely
// continuous, so the mesh is clustered there.
struct TimeMesh {
    std::vector<double> nodes;  // strictly increasing, nodes[0] == 0
    double refine_ratio = 0.5;

    static TimeMesh geometric(double horizon, int n_uniform, double refine_ratio,
                              double floor_frac = 1e-9);

    double horizon() const { return nodes.back(); }
    // largest index j with nodes[j] <= t (t within [0, horizon])
    int index_at_or_below(double t) const;
};

struct SpaceGrid {
    int dim = 1;
    std::array<std::vector<double>, kMaxDim> axes;

    static SpaceGrid uniform(const Box& box, int nodes_per_axis);

    long size() const;
    int axis_nodes(int axis) const { return static_cast<int>(axes[static_cast<std::size_t>(axis)].size()); }
    long stride(int axis) const;
    Point node(long flat) const;
    double spacing(int axis) const;

    // true if the node keeps at least `frac` of the box width away from
    // every face (probe placement for boundary-sensitive checks)
    bool is_interior(long flat, double frac) const;

    struct Stencil {
        int corners = 0;
        std::array<long, (1 << kMaxDim)> index{};
        std::array<double, (1 << kMaxDim)> weight{};
    };
    // multilinear interpolation stencil; the query is clamped to the box
    Stencil interpolation(const Point& y) const;
};

struct Grid {
    TimeMesh time;
    SpaceGrid space;
    BoundaryCondition boundary = BoundaryCondition::ZeroNormalDerivative;
};

struct GridSpec {
    int nt = 4096;            // uniform reversed-time steps
    int ny = 41;              // space nodes per axis
    double refine_ratio = 0.5;
};

Grid make_grid(const LiquidationProblem& problem, const GridSpec& spec);

}  // namespace liq
