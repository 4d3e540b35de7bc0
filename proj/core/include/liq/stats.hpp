#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace liq::stats {

// Pairwise (cascade) summation. Fixed association order, so ensemble
// reductions are bit-reproducible no matter how the per-path values were
// produced or batched.
double pairwise_sum(std::span<const double> values);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> values);

// Least-squares slope/intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace liq::stats
