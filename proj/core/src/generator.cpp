#include "generator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace liq::detail {

DiscreteGenerator assemble_generator(const LiquidationProblem& problem, const SpaceGrid& space) {
    const int d = space.dim;
    const int n = problem.factor.noise_dim;
    const long nspace = space.size();

    DiscreteGenerator gen;
    gen.l_eta.resize(static_cast<std::size_t>(nspace));
    gen.costs.reserve(static_cast<std::size_t>(nspace));
    gen.eta.resize(static_cast<std::size_t>(nspace));

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(nspace) * static_cast<std::size_t>(3 * d + 1));
    std::vector<double> sig(static_cast<std::size_t>(d * n));

    for (long i = 0; i < nspace; ++i) {
        const Point y = space.node(i);
        gen.costs.push_back(hjb::sample_costs(problem.costs, y));
        gen.eta[static_cast<std::size_t>(i)] = gen.costs.back().eta;

        problem.factor.sigma.eval(y, sig.data());
        Eigen::MatrixXd s = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                     Eigen::RowMajor>>(sig.data(), d, n);
        const Eigen::MatrixXd a2 = 0.5 * s * s.transpose();

        double diag = 0.0;
        long rem = i;
        std::array<int, kMaxDim> idx{};
        for (int a = 0; a < d; ++a) {
            idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % space.axis_nodes(a));
            rem /= space.axis_nodes(a);
        }

        for (int a = 0; a < d; ++a) {
            const double h = space.spacing(a);
            const long stride = space.stride(a);
            const int ia = idx[static_cast<std::size_t>(a)];
            const int na = space.axis_nodes(a);
            const double diff = a2(a, a) / (h * h);

            // diffusion: centered second difference; reflecting mirror ghost
            // at the faces keeps the row sum at zero
            if (ia > 0 && ia < na - 1) {
                trip.emplace_back(i, i - stride, diff);
                trip.emplace_back(i, i + stride, diff);
                diag -= 2.0 * diff;
            } else if (ia == 0) {
                trip.emplace_back(i, i + stride, 2.0 * diff);
                diag -= 2.0 * diff;
            } else {
                trip.emplace_back(i, i - stride, 2.0 * diff);
                diag -= 2.0 * diff;
            }

            // drift: first-order upwind; an outward-pointing component at a
            // face contributes nothing (zero normal derivative)
            const double b = problem.factor.drift[static_cast<std::size_t>(a)](y);
            if (b > 0.0 && ia < na - 1) {
                trip.emplace_back(i, i + stride, b / h);
                diag -= b / h;
            } else if (b < 0.0 && ia > 0) {
                trip.emplace_back(i, i - stride, -b / h);
                diag += b / h;
            }

            // mixed second derivatives, interior nodes only
            for (int bax = a + 1; bax < d; ++bax) {
                const double cross = 2.0 * a2(a, bax);
                if (cross == 0.0) continue;
                const int ib = idx[static_cast<std::size_t>(bax)];
                const int nb = space.axis_nodes(bax);
                if (ia == 0 || ia == na - 1 || ib == 0 || ib == nb - 1) continue;
                const long sb = space.stride(bax);
                const double hb = space.spacing(bax);
                const double w = cross / (4.0 * h * hb);
                trip.emplace_back(i, i + stride + sb, w);
                trip.emplace_back(i, i - stride - sb, w);
                trip.emplace_back(i, i + stride - sb, -w);
                trip.emplace_back(i, i - stride + sb, -w);
            }
        }
        trip.emplace_back(i, i, diag);
    }

    gen.L.resize(static_cast<Eigen::Index>(nspace), static_cast<Eigen::Index>(nspace));
    gen.L.setFromTriplets(trip.begin(), trip.end());
    gen.L.makeCompressed();

    // monotone iff every off-diagonal entry is nonnegative (row sums vanish
    // by construction); then (I - dt L)^{-1} is stochastic for any dt > 0
    gen.monotone = true;
    for (int k = 0; k < gen.L.outerSize() && gen.monotone; ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(gen.L, k); it; ++it) {
            if (it.row() != it.col() && it.value() < -1e-14) {
                gen.monotone = false;
                break;
            }
        }
    }

    Eigen::Map<const Eigen::VectorXd> eta_vec(gen.eta.data(), static_cast<Eigen::Index>(nspace));
    Eigen::VectorXd l_eta = gen.L * eta_vec;
    for (long i = 0; i < nspace; ++i)
        gen.l_eta[static_cast<std::size_t>(i)] = l_eta[static_cast<Eigen::Index>(i)];
    return gen;
}

ImplicitStepper::ImplicitStepper(const Eigen::SparseMatrix<double>& L, double kill)
    : L_(&L), kill_(kill) {}

void ImplicitStepper::solve(double dt, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
    auto it = cache_.find(dt);
    if (it == cache_.end()) {
        Eigen::SparseMatrix<double> A = (-dt) * (*L_);
        Eigen::SparseMatrix<double> I(L_->rows(), L_->cols());
        I.setIdentity();
        A += (1.0 + dt * kill_) * I;
        A.makeCompressed();
        auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        lu->compute(A);
        if (lu->info() != Eigen::Success)
            throw std::runtime_error("ImplicitStepper: factorization failed");
        it = cache_.emplace(dt, std::move(lu)).first;
    }
    out = it->second->solve(rhs);
}

double semigroup_sup_norm(const DiscreteGenerator& gen, std::span<const double> dts) {
    if (gen.monotone) return 1.0;
    ImplicitStepper stepper(gen.L, 0.0);
    const Eigen::Index n = gen.L.rows();
    double sup = 1.0;
    Eigen::VectorXd out(n);
    for (double dt : dts) {
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        stepper.solve(dt, ones, out);
        sup = std::max(sup, out.cwiseAbs().maxCoeff());
        // alternating sign probe stresses the cross-derivative stencils
        Eigen::VectorXd alt(n);
        for (Eigen::Index i = 0; i < n; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
        stepper.solve(dt, alt, out);
        sup = std::max(sup, out.cwiseAbs().maxCoeff());
    }
    return sup;
}

}  // namespace liq::detail
