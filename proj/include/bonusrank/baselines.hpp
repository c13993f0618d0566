#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bonusrank/arrangement.hpp"
#include "bonusrank/core.hpp"

namespace bonusrank {

struct BaselineResult {
    std::vector<double> weights;
    std::size_t bonus_count = 0;
    std::size_t samples_tried = 0;
    double elapsed = 0.0;  // seconds
};

// Stops at whichever is set and reached first; at least one must be positive.
struct SamplingBudget {
    std::size_t samples = 0;
    double seconds = 0.0;
};

// n - LIS of the weight order relabeled by pi positions, ties broken in pi order.
std::size_t bonus_count_for(const Dataset& dataset, const Ranking& pi, const std::vector<double>& weights);

// Explanation realizing pi non-strictly with weights plus singleton bonuses on the tuples
// outside one longest agreeing subsequence.
Explanation explanation_for_weights(const Dataset& dataset, const Ranking& pi, const std::vector<double>& weights);

BaselineResult sampling_baseline(const Dataset& dataset, const Ranking& pi, const SamplingBudget& budget,
                                 std::uint64_t seed, Quadrant quadrant = Quadrant::Positive);

// Gradient descent on the logistic loss over labeled pair differences (no intercept).
// Features are standardized internally; Positive projects onto w >= 0 after every step.
std::vector<double> pairwise_logistic(const Dataset& dataset, const Ranking& pi, std::size_t iterations,
                                      double step = 0.1, Quadrant quadrant = Quadrant::Full);

}  // namespace bonusrank
