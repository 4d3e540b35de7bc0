#include "liq/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace liq {

namespace {

std::string describe(const Point& y) {
    std::ostringstream os;
    os << "(";
    for (int a = 0; a < y.dim; ++a) {
        if (a) os << ", ";
        os << y[a];
    }
    os << ")";
    return os.str();
}

[[noreturn]] void reject(const std::string& assumption, const Point& witness, double value) {
    std::ostringstream os;
    os << "assumption violated: " << assumption << " fails at y = " << describe(witness)
       << " (value " << value << ")";
    throw ValidationError(os.str());
}

struct Mesh {
    const Box& box;
    int per_axis;
    std::array<double, kMaxDim> h{};

    explicit Mesh(const Box& b, int n) : box(b), per_axis(n) {
        for (int a = 0; a < b.dim; ++a) h[static_cast<std::size_t>(a)] = b.width(a) / (n - 1);
    }

    long total() const {
        long t = 1;
        for (int a = 0; a < box.dim; ++a) t *= per_axis;
        return t;
    }

    Point node(long flat) const {
        Point y;
        y.dim = box.dim;
        for (int a = 0; a < box.dim; ++a) {
            const long i = flat % per_axis;
            flat /= per_axis;
            y[a] = box.lo[a] + static_cast<double>(i) * h[static_cast<std::size_t>(a)];
        }
        return y;
    }

    // index of node along a given axis, for interior tests
    int axis_index(long flat, int axis) const {
        for (int a = 0; a < axis; ++a) flat /= per_axis;
        return static_cast<int>(flat % per_axis);
    }
};

double min_eigenvalue_sym(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) {
        const double a = m(0, 0), c = m(1, 1), b = m(0, 1);
        const double half = 0.5 * (a - c);
        return 0.5 * (a + c) - std::sqrt(half * half + b * b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Generator applied to eta by central differences on the validation mesh.
// Exact zero for constant eta, which the contraction certificate relies on.
double generator_of_eta_sup(const FactorModel& factor, const CostModel& costs, const Mesh& mesh) {
    const int d = factor.dim;
    std::vector<double> sig(static_cast<std::size_t>(d * factor.noise_dim));
    double sup = 0.0;
    const long total = mesh.total();
    for (long flat = 0; flat < total; ++flat) {
        bool interior = true;
        for (int a = 0; a < d; ++a) {
            const int i = mesh.axis_index(flat, a);
            if (i == 0 || i == mesh.per_axis - 1) interior = false;
        }
        if (!interior) continue;
        const Point y = mesh.node(flat);
        factor.sigma.eval(y, sig.data());
        Eigen::MatrixXd s = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                      Eigen::RowMajor>>(sig.data(), d, factor.noise_dim);
        const Eigen::MatrixXd a2 = 0.5 * s * s.transpose();

        double val = 0.0;
        const double eta0 = costs.eta(y);
        for (int a = 0; a < d; ++a) {
            const double h = mesh.h[static_cast<std::size_t>(a)];
            Point yp = y, ym = y;
            yp[a] += h;
            ym[a] -= h;
            const double ep = costs.eta(yp), em = costs.eta(ym);
            val += a2(a, a) * (ep - 2.0 * eta0 + em) / (h * h);
            val += factor.drift[static_cast<std::size_t>(a)](y) * (ep - em) / (2.0 * h);
        }
        for (int a = 0; a < d; ++a) {
            for (int b = a + 1; b < d; ++b) {
                const double ha = mesh.h[static_cast<std::size_t>(a)];
                const double hb = mesh.h[static_cast<std::size_t>(b)];
                Point pp = y, pm = y, mp = y, mm = y;
                pp[a] += ha; pp[b] += hb;
                pm[a] += ha; pm[b] -= hb;
                mp[a] -= ha; mp[b] += hb;
                mm[a] -= ha; mm[b] -= hb;
                val += 2.0 * a2(a, b) *
                       (costs.eta(pp) + costs.eta(mm) - costs.eta(pm) - costs.eta(mp)) /
                       (4.0 * ha * hb);
            }
        }
        sup = std::max(sup, std::abs(val));
    }
    return sup;
}

void validate(const ProblemInputs& in, CostModel* measured) {
    const FactorModel& factor = in.factor;
    const CostModel& costs = in.costs;

    if (!(costs.p > 1.0))
        throw ValidationError("assumption violated: cost exponent must satisfy p > 1 (got p = " +
                              std::to_string(costs.p) + ")");
    if (!(costs.kappa0 > 0.0))
        throw ValidationError("assumption violated: eta floor kappa0 must be positive");
    if (costs.theta < 0.0) throw ValidationError("dark-pool intensity theta must be nonnegative");
    if (!(in.horizon > 0.0)) throw ValidationError("horizon T must be positive");
    if (!(in.t0 >= 0.0 && in.t0 < in.horizon))
        throw ValidationError("initial time t0 must lie in [0, T)");
    if (factor.dim < 1 || factor.dim > kMaxDim || factor.noise_dim < 1)
        throw ValidationError("factor dimensions out of supported range");
    if (static_cast<int>(factor.drift.size()) != factor.dim)
        throw ValidationError("drift must supply one component per factor dimension");
    if (factor.sigma.rows() != factor.dim || factor.sigma.cols() != factor.noise_dim)
        throw ValidationError("sigma shape must be dim x noise_dim");
    if (in.domain.dim != factor.dim) throw ValidationError("domain dimension mismatch");
    for (int a = 0; a < factor.dim; ++a)
        if (!(in.domain.lo[a] < in.domain.hi[a]))
            throw ValidationError("domain box is empty along an axis");
    if (!in.domain.contains(in.y0))
        throw ValidationError("initial factor state y0 lies outside the truncation box");
    if (!(factor.ellipticity_min > 0.0))
        throw ValidationError(
            "assumption violated: declared ellipticity bound on sigma sigma^T must be positive");
    if (in.validation_nodes_per_axis < 5)
        throw ValidationError("validation mesh needs at least 5 nodes per axis");

    const Mesh mesh(in.domain, in.validation_nodes_per_axis);
    const int d = factor.dim;
    const int n = factor.noise_dim;
    std::vector<double> sig(static_cast<std::size_t>(d * n));

    double eta_sup = 0.0, lambda_sup = 0.0;
    const double lip_limit = factor.lipschitz_const * (1.0 + in.lipschitz_slack) + 1e-12;

    const long total = mesh.total();
    for (long flat = 0; flat < total; ++flat) {
        const Point y = mesh.node(flat);

        const double eta = costs.eta(y);
        const double gam = costs.gamma(y);
        const double lam = costs.lambda(y);
        if (!std::isfinite(eta) || !std::isfinite(gam) || !std::isfinite(lam))
            reject("cost coefficients evaluate finitely", y, eta);
        if (eta < costs.kappa0) reject("eta >= kappa0 > 0", y, eta);
        if (gam < 0.0) reject("gamma >= 0", y, gam);
        if (lam < 0.0) reject("lambda >= 0", y, lam);
        eta_sup = std::max(eta_sup, eta);
        lambda_sup = std::max(lambda_sup, lam);

        double drift_norm2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double ba = factor.drift[static_cast<std::size_t>(a)](y);
            if (!std::isfinite(ba)) reject("drift evaluates finitely", y, ba);
            drift_norm2 += ba * ba;
        }
        if (std::sqrt(drift_norm2) > factor.drift_sup + 1e-12)
            reject("declared sup bound on |b|", y, std::sqrt(drift_norm2));

        factor.sigma.eval(y, sig.data());
        for (double s : sig) {
            if (!std::isfinite(s)) reject("sigma evaluates finitely", y, s);
            if (std::abs(s) > factor.sigma_sup + 1e-12)
                reject("declared sup bound on |sigma|", y, s);
        }
        Eigen::MatrixXd s = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                     Eigen::RowMajor>>(sig.data(), d, n);
        const double lam_min = min_eigenvalue_sym(s * s.transpose());
        if (lam_min < factor.ellipticity_min - 1e-12)
            reject("uniform ellipticity of sigma sigma^T", y, lam_min);

        // sampled Lipschitz ratios along each axis
        for (int a = 0; a < d; ++a) {
            if (mesh.axis_index(flat, a) == mesh.per_axis - 1) continue;
            const double h = mesh.h[static_cast<std::size_t>(a)];
            Point yp = y;
            yp[a] += h;
            for (int c = 0; c < d; ++c) {
                const double diff = std::abs(factor.drift[static_cast<std::size_t>(c)](yp) -
                                             factor.drift[static_cast<std::size_t>(c)](y));
                if (diff / h > lip_limit) reject("declared Lipschitz constant of b", y, diff / h);
            }
            std::vector<double> sigp(static_cast<std::size_t>(d * n));
            factor.sigma.eval(yp, sigp.data());
            for (std::size_t k = 0; k < sig.size(); ++k) {
                const double diff = std::abs(sigp[k] - sig[k]);
                if (diff / h > lip_limit)
                    reject("declared Lipschitz constant of sigma", y, diff / h);
            }
        }
    }

    if (measured) {
        measured->eta_sup = eta_sup;
        measured->lambda_sup = lambda_sup;
        measured->gen_eta_sup = generator_of_eta_sup(factor, costs, mesh);
    }
}

}  // namespace

LiquidationProblem build_problem(const ProblemInputs& inputs) {
    LiquidationProblem p;
    p.factor = inputs.factor;
    p.costs = inputs.costs;
    p.horizon = inputs.horizon;
    p.domain = inputs.domain;
    p.t0 = inputs.t0;
    p.x0 = inputs.x0;
    p.y0 = inputs.y0;
    p.y0.dim = inputs.domain.dim;
    p.validation_nodes_per_axis = inputs.validation_nodes_per_axis;
    validate(inputs, &p.costs);
    return p;
}

void revalidate(const LiquidationProblem& problem) {
    ProblemInputs in;
    in.factor = problem.factor;
    in.costs = problem.costs;
    in.horizon = problem.horizon;
    in.domain = problem.domain;
    in.t0 = problem.t0;
    in.x0 = problem.x0;
    in.y0 = problem.y0;
    in.validation_nodes_per_axis = problem.validation_nodes_per_axis;
    validate(in, nullptr);
}

}  // namespace liq
