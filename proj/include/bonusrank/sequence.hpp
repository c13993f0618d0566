#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bonusrank/core.hpp"

namespace bonusrank {

struct LisResult {
    std::size_t length = 0;
    std::vector<int> kept;  // values of one longest increasing subsequence, ascending
};

struct LcsResult {
    std::size_t length = 0;
    std::vector<std::string> kept;             // matched ids in pi order
    std::map<std::string, int> assignment;     // id -> copy label for budget-consuming matches
    std::size_t budget_used = 0;
};

// relabeled must be a permutation of 1..n.
LisResult lis(const std::vector<int>& relabeled);

// Length only, no reconstruction; any distinct integers.
std::size_t lis_length(const std::vector<int>& seq);

// Each entry of rho_aug is (id, copy label 0..g).
LcsResult budgeted_multigroup_lcs(const Ranking& pi, const std::vector<std::pair<std::string, int>>& rho_aug,
                                  std::size_t g, std::size_t k);

namespace detail {

// Integer form used by the exact solver. pi_pos[t] = position of tuple t in pi,
// rho[j] = (tuple, label). Returns the max matched length with budget <= k.
std::size_t mg_lcs_length(const std::vector<std::size_t>& pi_order, const std::vector<std::pair<std::size_t, int>>& rho,
                          std::size_t k, std::size_t* min_budget = nullptr);

struct MgMatch {
    std::size_t length = 0;
    std::size_t budget = 0;
    std::vector<std::pair<std::size_t, int>> matches;  // (tuple, label) in pi order
};

MgMatch mg_lcs_reconstruct(const std::vector<std::size_t>& pi_order,
                           const std::vector<std::pair<std::size_t, int>>& rho, std::size_t k);

}  // namespace detail

}  // namespace bonusrank
