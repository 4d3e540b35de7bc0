#pragma once

#include <optional>
#include <span>
#include <vector>

#include "liq/hjb.hpp"
#include "liq/rng.hpp"
#include "liq/surface.hpp"

namespace liq {

struct FillEvent {
    double time;
    double size;  // executed shares (equals the posted size; fills are all-or-nothing)
};

struct CostBreakdown {
    double rate = 0.0;            // trapezoid of eta |xi|^p
    double risk = 0.0;            // trapezoid of lambda |X|^p
    double pool_pathwise = 0.0;   // gamma |pi|^p summed over realized fills
    double pool_intensity = 0.0;  // theta gamma |pi|^p dt bookkeeping cross-check
    double forced = 0.0;          // final-step clean-up of the residual position

    // pathwise accounting; the intensity form is recorded alongside, not added
    double total() const { return rate + risk + pool_pathwise + forced; }
};

// One simulated trajectory. `position` is the value after any fill at that
// node; `xi`/`pi` are the rate applied on [t_k, t_{k+1}) and the size posted
// at t_k from pre-jump information.
struct PathResult {
    int dim = 1;
    std::vector<double> times;
    std::vector<double> factor;  // node-major, dim entries per node
    std::vector<double> position;
    std::vector<double> xi;
    std::vector<double> pi;
    std::vector<double> running_cost;  // pathwise cost accumulated up to each node
    std::vector<FillEvent> fills;
    CostBreakdown cost;
    double terminal_position = 0.0;  // X just before the forced final execution

    Point factor_at(std::size_t node) const;
};

struct Strategy {
    enum class Kind { Feedback, Twap, PrimaryOnlyFeedback, RateTable };
    Kind kind = Kind::Twap;

    // RateTable: piecewise-constant rate (and posted size) on [t_k, t_{k+1})
    std::vector<double> table_times;
    std::vector<double> table_rates;
    std::vector<double> table_posts;

    static Strategy feedback() { return {Kind::Feedback, {}, {}, {}}; }
    static Strategy twap() { return {Kind::Twap, {}, {}, {}}; }
    static Strategy primary_only() { return {Kind::PrimaryOnlyFeedback, {}, {}, {}}; }
    static Strategy rate_table(std::vector<double> times, std::vector<double> rates,
                               std::vector<double> posts);
};

std::vector<double> uniform_mesh(double t0, double horizon, int steps);

// Euler-Maruyama factor path on the mesh, reflected at the truncation box
// (the PDE boundary condition). Appends dim values per mesh node.
void simulate_factor(const LiquidationProblem& problem, double t0, const Point& y0,
                     std::span<const double> mesh, rng::Stream& noise,
                     std::vector<double>& factor_out);

// Poisson jump times with intensity theta on (t0, horizon], exponential
// interarrival sampling.
std::vector<double> sample_fill_times(double theta, double t0, double horizon,
                                      rng::Stream& clock);

// Simulates one controlled path. Feedback strategies need the value surface;
// between nodes the position follows the exact exponential update of the
// frozen feedback rate, fills are processed at their sampled times with the
// posted size computed from the pre-jump state, and the residual position at
// the final node is executed at rate X/dt with its cost booked as `forced`.
PathResult run_strategy(const LiquidationProblem& problem, const Strategy& strategy,
                        const ValueSurface* surface, std::span<const double> mesh,
                        rng::PathRng& rng);

struct CostEstimate {
    double mean = 0.0;
    double se = 0.0;
    double mean_abs_terminal = 0.0;  // mean |X_{T-}| before forced execution
    double forced_share = 0.0;       // forced cost / total cost, ensemble means
    long n_paths = 0;
};

CostEstimate estimate_cost(const LiquidationProblem& problem, const Strategy& strategy,
                           const ValueSurface* surface, long n_paths, std::uint64_t seed,
                           int mesh_steps);

// Raw (possibly inadmissible-looking) controls recorded along one path:
// piecewise-constant rates on the mesh segments and sizes posted at given
// fill nodes. Factor values are carried per node for cost evaluation.
struct ControlPath {
    int dim = 1;
    std::vector<double> times;
    std::vector<double> factor;     // node-major, dim per node
    std::vector<double> rates;      // size times.size() - 1
    std::vector<int> fill_nodes;    // indices into times, strictly increasing
    std::vector<double> posted;     // one per fill node
    double x0 = 0.0;
};

struct ReductionResult {
    std::vector<double> reduced_rates;   // per segment, before any zero-position cutoff
    std::vector<double> reduced_posted;  // per fill
    std::vector<double> refined_times;   // original nodes plus zero-crossing times
    std::vector<double> raw_position;    // signed X path sampled on refined_times
    std::vector<double> reduced_position;
    double raw_cost = 0.0;
    double reduced_cost = 0.0;
    bool reduced_monotone = true;
};

// Keeps only sell-side effort while the position is open: rates clipped to
// xi 1{xi>=0} 1{X>0} and posts to (pi ^ X_-) 1{pi>=0} 1{X_->0}. Never costs
// more than the raw controls and the reduced position is monotone.
ReductionResult monotone_reduction(const LiquidationProblem& problem, const ControlPath& raw);

}  // namespace liq
