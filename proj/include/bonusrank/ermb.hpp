#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bonusrank/arrangement.hpp"
#include "bonusrank/core.hpp"

namespace bonusrank {

struct AugmentedDataset {
    Dataset base;
    std::size_t g = 0;
    Dataset tuples;                                      // (g+1)n rows, d+g columns
    std::vector<std::pair<std::size_t, int>> copy_of;    // row -> (base row, copy label)
};

AugmentedDataset augment(const Dataset& dataset, std::size_t g);

enum class SolveStatus { Feasible, Infeasible, Limit };

const char* to_string(SolveStatus s);

struct ErmbResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Explanation> explanation;  // best region's explanation (present even when over budget, singleton)
    std::optional<std::size_t> min_k;         // singleton: n - max LIS
    std::size_t regions = 0;
    RegionStats stats;
};

struct ErmbOptions {
    std::size_t dim_cap = 5;        // multigroup: refuse when d + g exceeds this
    std::size_t max_regions = 2'000'000;
    double time_limit = 0.0;  // seconds, 0: none; hitting it yields SolveStatus::Limit
};

ErmbResult explain_singleton(const Dataset& dataset, const Ranking& pi, std::size_t k,
                             Quadrant quadrant = Quadrant::Positive, const ErmbOptions& opt = {});

ErmbResult explain_multigroup(const Dataset& dataset, const Ranking& pi, std::size_t g, std::size_t k,
                              Quadrant quadrant = Quadrant::Positive, const ErmbOptions& opt = {});

// Minimal signed bonuses that slot the tuples outside `kept` into their pi positions
// (non-strict), by one backward pass over pi. pi_order holds row indices.
std::vector<Group> singleton_bonuses(const Dataset& dataset, const std::vector<std::size_t>& pi_order,
                                     const std::vector<char>& kept_at_position, const std::vector<double>& weights);

}  // namespace bonusrank
