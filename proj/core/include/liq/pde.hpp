#pragma once

#include <stdexcept>
#include <vector>

#include "liq/surface.hpp"

namespace liq {

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolveOptions {
    double series_tol = 1e-12;
    int max_step_halvings = 30;   // growth-condition rescue before giving up
    double growth_slack = 1e-9;   // relative allowance on |u| <= t eta
    bool corrector = true;        // one Heun pass on the lagged nonlinearity
};

// Implicit method-of-lines solve of the transformed equation in reversed
// time: backward Euler in the generator and the -theta u term, the series
// and dark-pool parts of the nonlinearity lagged one level. By default the
// lagged part gets one predictor-corrector sweep (still no nonlinear solve),
// which removes the first-order bias that would otherwise poke through the
// tight near-terminal envelope margins. A step that breaches |u| <= t eta is
// re-taken with halved steps; running out of halvings throws SolveError
// naming the node.
TransformedSurface solve_u(const LiquidationProblem& problem, const Grid& grid,
                           const SolveOptions& options = {});

ValueSurface solve_v(const LiquidationProblem& problem, const Grid& grid,
                     const SolveOptions& options = {});

// Constants certifying that the fixed-point map of the transformed equation
// is a 1/2-contraction on the ball of radius R in the weighted norm, on the
// horizon [0, delta]:
//   R = 2 M (||L eta|| + ||lambda|| + theta ||eta||)
//   L = p (2^beta - 1) kappa0^-2 R ||eta|| + theta
//   delta = min{ kappa0 / R, (2 M L)^-1, 1 }
// M is the measured sup-norm bound of the one-step discrete semigroup; it is
// exactly 1 when the assembled scheme is monotone.
struct ContractionCertificate {
    double M = 1.0;
    double R = 0.0;
    double L = 0.0;
    double delta = 1.0;
    bool degenerate_R = false;             // all source terms vanish, u == 0
    std::vector<double> observed_factors;  // filled in by picard_run callers
};

ContractionCertificate contraction_certificate(const LiquidationProblem& problem,
                                               const Grid& grid);
ContractionCertificate contraction_certificate(const LiquidationProblem& problem);

// One Picard sweep history: iterates of the integral-operator fixed point
// realized with the discrete semigroup (one implicit solve per quadrature
// node), started from u = 0.
struct PicardResult {
    std::vector<TransformedSurface> iterates;  // [u_0, u_1, ..., u_n]
    std::vector<double> distances;             // ||u_{m+1} - u_m||_E
    std::vector<double> factors;               // successive distance ratios
    std::vector<double> ball_norms;            // ||u_m||_E per iterate
    double ball_radius = 0.0;
    bool left_ball = false;
};

PicardResult picard_run(const LiquidationProblem& problem, const Grid& grid, double delta,
                        int n_iter, const SolveOptions& options = {});

// sup over mesh nodes 0 < t <= delta of max_y |u(t,y)| / t^2
double weighted_norm(const TransformedSurface& u, double delta);

struct AsymptoticsReport {
    std::vector<double> taus;            // decreasing times-to-deadline
    std::vector<double> deviations;      // sup_y |tau^(1/beta) v - eta|
    std::vector<double> ratios;          // deviation / tau
    double fitted_slope = 0.0;           // log-log slope of deviation vs tau
    double max_ratio = 0.0;
    bool exact_leading = false;          // deviations all at roundoff level
    bool ratio_bounded = false;
};

// Samples tau_k = T 2^-k for k = first_octave .. first_octave + n_taus - 1,
// snapped to grid levels. The sequence starts a few octaves below T so the
// fit sees the terminal regime rather than the O(1) transient.
AsymptoticsReport check_asymptotics(const ValueSurface& surface, int n_taus = 8,
                                    double interior_frac = 0.2, int first_octave = 3);

}  // namespace liq
