#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bonusrank/core.hpp"
#include "bonusrank/lpsolve.hpp"

namespace bonusrank {

struct ComparisonHyperplane {
    std::size_t i = 0, j = 0;    // i < j
    std::vector<double> normal;  // t_i - t_j
    bool degenerate = false;     // identical tuples
};

std::vector<ComparisonHyperplane> build_hyperplanes(const Dataset& dataset);

enum class Quadrant { Positive, Full };

Cone cone_for(Quadrant q, std::size_t d);

struct SignRegion {
    std::vector<double> witness;     // unit 1-norm, clears every hyperplane by >= kInteriorMargin
    std::vector<std::size_t> order;  // row indices, best first; equals order_from_weights(witness)
    double margin = 0.0;

    Ranking ranking(const Dataset& dataset) const;
    // One char per build_hyperplanes entry: '+' (t_i ahead), '-' or '0' (degenerate).
    std::string signs(const Dataset& dataset) const;
};

struct RegionStats {
    std::size_t yielded = 0;
    std::size_t thin_skipped = 0;  // cells whose best witness margin is below kInteriorMargin
    std::size_t lp_failures = 0;   // LP stalled on a candidate cell
    std::size_t lp_solves = 0;
    std::size_t candidates = 0;
};

// Return false to stop the enumeration early.
using RegionVisitor = std::function<bool(const SignRegion&)>;

enum class RegionMethod { Auto, Generic };

struct RegionOptions {
    RegionMethod method = RegionMethod::Auto;
    std::size_t max_regions = 0;  // 0: unlimited; otherwise RefusalError once exceeded
};

RegionStats enumerate_regions_2d(const Dataset& dataset, Quadrant quadrant, const RegionVisitor& visit);

RegionStats enumerate_regions(const Dataset& dataset, Quadrant quadrant, const RegionVisitor& visit,
                              const RegionOptions& opt = {});
RegionStats enumerate_regions(const Dataset& dataset, const Cone& cone, const RegionVisitor& visit,
                              const RegionOptions& opt = {});

std::vector<SignRegion> collect_regions(const Dataset& dataset, Quadrant quadrant, const RegionOptions& opt = {},
                                        RegionStats* stats = nullptr);

// Rows with identical values share a class id.
std::vector<std::size_t> duplicate_classes(const Dataset& dataset);

// Lexicographic comparison of the sign vectors induced by two orders ('+' < '-'),
// given as positions per row. Returns <0, 0, >0.
int compare_sign_vectors(const std::vector<std::size_t>& pos_a, const std::vector<std::size_t>& pos_b,
                         const std::vector<std::size_t>& dup_class);

}  // namespace bonusrank
