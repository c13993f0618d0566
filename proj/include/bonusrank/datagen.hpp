#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bonusrank/core.hpp"

namespace bonusrank {

enum class Distribution { Uniform, Zipf };

const char* to_string(Distribution d);
Distribution parse_distribution(const std::string& s);  // "uniform" | "zipf"

struct GenParams {
    std::size_t n = 0, d = 0, g = 1, k = 0;
    Distribution dist = Distribution::Uniform;
    std::uint64_t seed = 0;
};

struct PlantedInstance {
    Dataset dataset;  // planted() holds the group label per tuple, "none" outside every group
    Ranking pi;
    std::vector<double> true_weights;
    std::vector<Group> true_bonuses;  // one per group, members in id order
    GenParams params;

    Explanation explanation() const;  // the planted certificate, non-strict
};

PlantedInstance gen_synthetic(const GenParams& params);
PlantedInstance gen_synthetic(std::size_t n, std::size_t d, std::size_t g, std::size_t k, Distribution dist,
                              std::uint64_t seed);


struct TwoCnf {
    std::size_t n_vars = 0;
    std::vector<std::pair<int, int>> clauses;  // signed 1-based literals

    std::size_t m() const { return clauses.size(); }
    void validate() const;
};

// Lines of two nonzero signed integers (an optional trailing 0 is ignored);
// 'c' comments and a 'p cnf <vars> <clauses>' header are accepted.
TwoCnf parse_two_cnf(std::istream& in);
TwoCnf parse_two_cnf_text(const std::string& text);
std::string two_cnf_text(const TwoCnf& f);

struct ReductionInstance {
    Dataset dataset;  // n_vars columns
    Ranking pi;
    long k_decision = 0;  // m - r
    std::size_t ell = 0;  // padding points
    std::vector<std::string> clause_point_ids;
    TwoCnf formula;
    std::size_t r = 0;
};

// block_size overrides the n_vars^2 padding points per gap (0: as constructed).
ReductionInstance reduce_max1in2sat(const TwoCnf& formula, std::size_t r, std::size_t block_size = 0);

std::size_t oracle_max1in2sat(const TwoCnf& formula);
std::size_t oracle_reduction_min_bonuses(const ReductionInstance& instance);

}  // namespace bonusrank
