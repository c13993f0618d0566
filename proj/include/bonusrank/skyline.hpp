#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bonusrank/core.hpp"

namespace bonusrank {

struct DominanceRecord {
    std::string forced_id;
    std::string witness_id;  // dominates forced_id and sits below it in pi
    std::size_t iteration = 1;

    bool operator==(const DominanceRecord&) const = default;
};

// Pairwise: O(n^2 d). Sweep: x-sorted sweep with a Fenwick tree, d <= 2 only.
enum class SkylineMethod { Auto, Pairwise, Sweep };

// Tuples that need a bonus under any non-negative weights, sorted by forced_id.
// The witness is the lowest-ranked dominator.
std::vector<DominanceRecord> forced_bonus_tuples(const Dataset& dataset, const Ranking& pi,
                                                 SkylineMethod method = SkylineMethod::Auto);

// a >= b everywhere, > somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

}  // namespace bonusrank
