#pragma once

// Internal: finite-difference generator assembly and the cached implicit
// step solver. Not installed; Eigen stays out of the public headers.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "liq/grid.hpp"
#include "liq/hjb.hpp"
#include "liq/model.hpp"

namespace liq::detail {

struct DiscreteGenerator {
    Eigen::SparseMatrix<double> L;        // centered diffusion, upwinded drift
    std::vector<double> l_eta;            // L applied to the eta samples
    std::vector<hjb::LocalCosts> costs;   // coefficient samples per node
    std::vector<double> eta;              // eta samples (shared with surfaces)
    bool monotone = false;                // off-diagonals >= 0 and row sums ~ 0
};

DiscreteGenerator assemble_generator(const LiquidationProblem& problem, const SpaceGrid& space);

// Solves ((1 + dt*kill) I - dt L) x = rhs with one LU factorization cached
// per distinct dt.
class ImplicitStepper {
public:
    ImplicitStepper(const Eigen::SparseMatrix<double>& L, double kill);
    void solve(double dt, const Eigen::VectorXd& rhs, Eigen::VectorXd& out);

private:
    const Eigen::SparseMatrix<double>* L_;
    double kill_;
    std::map<double, std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>> cache_;
};

// Measured sup-norm bound of (I - dt L)^{-1} over the given dt samples.
// Returns exactly 1 for a monotone generator (stochastic inverse); otherwise
// probes with the ones vector and deterministic sign patterns.
double semigroup_sup_norm(const DiscreteGenerator& gen, std::span<const double> dts);

}  // namespace liq::detail
