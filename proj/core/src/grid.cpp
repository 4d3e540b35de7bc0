#include "liq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liq {

TimeMesh TimeMesh::geometric(double horizon, int n_uniform, double refine_ratio,
                             double floor_frac) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeMesh: horizon must be positive");
    if (n_uniform < 2) throw std::invalid_argument("TimeMesh: need at least 2 uniform steps");
    if (!(refine_ratio > 0.0 && refine_ratio < 1.0))
        throw std::invalid_argument("TimeMesh: refinement ratio must lie in (0,1)");

    TimeMesh mesh;
    mesh.refine_ratio = refine_ratio;
    const double h = horizon / n_uniform;
    const double floor_time = horizon * floor_frac;

    std::vector<double> cluster;  // descending geometric subnodes within (0, h)
    double t = h * refine_ratio;
    while (t > floor_time && cluster.size() < 512) {
        cluster.push_back(t);
        t *= refine_ratio;
    }

    mesh.nodes.reserve(cluster.size() + static_cast<std::size_t>(n_uniform) + 1);
    mesh.nodes.push_back(0.0);
    for (auto it = cluster.rbegin(); it != cluster.rend(); ++it) mesh.nodes.push_back(*it);
    for (int j = 1; j <= n_uniform; ++j)
        mesh.nodes.push_back(static_cast<double>(j) * h);
    mesh.nodes.back() = horizon;  // guard against accumulation drift
    return mesh;
}

int TimeMesh::index_at_or_below(double t) const {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    return static_cast<int>(it - nodes.begin()) - 1;
}

SpaceGrid SpaceGrid::uniform(const Box& box, int nodes_per_axis) {
    if (nodes_per_axis < 3)
        throw std::invalid_argument("SpaceGrid: need at least 3 nodes per axis");
    SpaceGrid g;
    g.dim = box.dim;
    for (int a = 0; a < box.dim; ++a) {
        auto& axis = g.axes[static_cast<std::size_t>(a)];
        axis.resize(static_cast<std::size_t>(nodes_per_axis));
        const double h = box.width(a) / (nodes_per_axis - 1);
        for (int i = 0; i < nodes_per_axis; ++i)
            axis[static_cast<std::size_t>(i)] = box.lo[a] + i * h;
        axis.back() = box.hi[a];
    }
    return g;
}

long SpaceGrid::size() const {
    long s = 1;
    for (int a = 0; a < dim; ++a) s *= axis_nodes(a);
    return s;
}

long SpaceGrid::stride(int axis) const {
    long s = 1;
    for (int a = 0; a < axis; ++a) s *= axis_nodes(a);
    return s;
}

Point SpaceGrid::node(long flat) const {
    Point y;
    y.dim = dim;
    for (int a = 0; a < dim; ++a) {
        const int n = axis_nodes(a);
        y[a] = axes[static_cast<std::size_t>(a)][static_cast<std::size_t>(flat % n)];
        flat /= n;
    }
    return y;
}

double SpaceGrid::spacing(int axis) const {
    const auto& ax = axes[static_cast<std::size_t>(axis)];
    return ax[1] - ax[0];
}

bool SpaceGrid::is_interior(long flat, double frac) const {
    for (int a = 0; a < dim; ++a) {
        const int n = axis_nodes(a);
        const int i = static_cast<int>(flat % n);
        flat /= n;
        const auto& ax = axes[static_cast<std::size_t>(a)];
        const double width = ax.back() - ax.front();
        const double pos = ax[static_cast<std::size_t>(i)];
        if (pos - ax.front() < frac * width || ax.back() - pos < frac * width) return false;
    }
    return true;
}

SpaceGrid::Stencil SpaceGrid::interpolation(const Point& y) const {
    std::array<int, kMaxDim> cell{};
    std::array<double, kMaxDim> frac{};
    for (int a = 0; a < dim; ++a) {
        const auto& ax = axes[static_cast<std::size_t>(a)];
        const double x = std::clamp(y[a], ax.front(), ax.back());
        const double h = ax[1] - ax[0];
        int i = static_cast<int>((x - ax.front()) / h);
        i = std::clamp(i, 0, static_cast<int>(ax.size()) - 2);
        cell[static_cast<std::size_t>(a)] = i;
        frac[static_cast<std::size_t>(a)] = (x - ax[static_cast<std::size_t>(i)]) / h;
    }
    Stencil st;
    st.corners = 1 << dim;
    for (int corner = 0; corner < st.corners; ++corner) {
        long idx = 0;
        double w = 1.0;
        long stride_acc = 1;
        for (int a = 0; a < dim; ++a) {
            const int bit = (corner >> a) & 1;
            idx += stride_acc * (cell[static_cast<std::size_t>(a)] + bit);
            w *= bit ? frac[static_cast<std::size_t>(a)] : 1.0 - frac[static_cast<std::size_t>(a)];
            stride_acc *= axis_nodes(a);
        }
        st.index[static_cast<std::size_t>(corner)] = idx;
        st.weight[static_cast<std::size_t>(corner)] = w;
    }
    return st;
}

Grid make_grid(const LiquidationProblem& problem, const GridSpec& spec) {
    Grid g;
    g.time = TimeMesh::geometric(problem.horizon, spec.nt, spec.refine_ratio);
    g.space = SpaceGrid::uniform(problem.domain, spec.ny);
    g.boundary = problem.boundary;
    return g;
}

}  // namespace liq
