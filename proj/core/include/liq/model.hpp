#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "liq/coefficients.hpp"

namespace liq {

// Thrown when a problem fails its standing assumptions. The message names
// the violated assumption and the witness node found on the validation mesh.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Factor diffusion dY = b(Y) dt + sigma(Y) dW on R^d, n-dimensional noise.
// The declared bounds are promises checked against a dense sample of the
// truncated domain; they also feed the solver's contraction certificate.
struct FactorModel {
    int dim = 1;
    int noise_dim = 1;
    std::vector<ScalarField> drift;  // one component per dimension
    MatrixField sigma;

    double lipschitz_const = 0.0;   // declared, for both b and sigma entries
    double ellipticity_min = 0.0;   // declared lower bound on eig(sigma sigma^T)
    double drift_sup = 0.0;         // declared ||b||
    double sigma_sup = 0.0;         // declared max |sigma_ij|
};

// Running-cost structure: eta |xi|^p + gamma |pi|^p + lambda |X|^p, plus the
// Poisson intensity theta of dark-pool matching times.
struct CostModel {
    ScalarField eta;     // temporary impact, >= kappa0 > 0
    ScalarField gamma;   // adverse selection, >= 0
    ScalarField lambda;  // risk, >= 0
    double theta = 0.0;
    double p = 2.0;
    double kappa0 = 0.0;

    // populated by build_problem from the validation mesh
    double eta_sup = 0.0;
    double lambda_sup = 0.0;
    double gen_eta_sup = 0.0;  // sup |L eta|, L the factor generator

    double beta() const { return 1.0 / (p - 1.0); }
};

// How the truncated domain closes the problem posed on all of R^d. The PDE
// discretization and the path simulator must agree on this.
enum class BoundaryCondition { ZeroNormalDerivative };

struct LiquidationProblem {
    FactorModel factor;
    CostModel costs;
    double horizon = 1.0;  // T
    Box domain;            // truncation box
    BoundaryCondition boundary = BoundaryCondition::ZeroNormalDerivative;
    double t0 = 0.0;
    double x0 = 1.0;  // initial position, shares
    Point y0;
    int validation_nodes_per_axis = 101;
};

struct ProblemInputs {
    FactorModel factor;
    CostModel costs;
    double horizon = 1.0;
    Box domain;
    double t0 = 0.0;
    double x0 = 1.0;
    Point y0;
    int validation_nodes_per_axis = 101;
    double lipschitz_slack = 0.05;  // sampled ratio may exceed declared by this fraction
};

// Validates every standing assumption on a dense mesh of the domain box and
// returns the problem with measured sup norms filled in. Throws
// ValidationError naming the assumption and witness node otherwise.
LiquidationProblem build_problem(const ProblemInputs& inputs);

// Re-runs validation on an already-built problem (idempotence guarantee).
void revalidate(const LiquidationProblem& problem);

}  // namespace liq
