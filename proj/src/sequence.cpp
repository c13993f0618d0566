#include "bonusrank/sequence.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "bonusrank/errors.hpp"

namespace bonusrank {

std::size_t lis_length(const std::vector<int>& seq) {
    std::vector<int> tails;
    for (int v : seq) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end())
            tails.push_back(v);
        else
            *it = v;
    }
    return tails.size();
}

LisResult lis(const std::vector<int>& relabeled) {
    const std::size_t n = relabeled.size();
    std::vector<char> seen(n + 1, 0);
    for (int v : relabeled) {
        if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)])
            throw ContractError("lis: input is not a permutation of 1..n");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    // patience sorting with back-pointers
    std::vector<std::size_t> tails;  // index into relabeled of the pile top
    std::vector<long> prev(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        int v = relabeled[i];
        auto it = std::lower_bound(tails.begin(), tails.end(), v,
                                   [&](std::size_t idx, int val) { return relabeled[idx] < val; });
        std::size_t pile = static_cast<std::size_t>(it - tails.begin());
        if (pile > 0) prev[i] = static_cast<long>(tails[pile - 1]);
        if (it == tails.end())
            tails.push_back(i);
        else
            *it = i;
    }
    LisResult r;
    r.length = tails.size();
    if (!tails.empty()) {
        for (long i = static_cast<long>(tails.back()); i >= 0; i = prev[static_cast<std::size_t>(i)])
            r.kept.push_back(relabeled[static_cast<std::size_t>(i)]);
        std::reverse(r.kept.begin(), r.kept.end());
    }
    return r;
}

namespace detail {

std::size_t mg_lcs_length(const std::vector<std::size_t>& pi_order, const std::vector<std::pair<std::size_t, int>>& rho,
                          std::size_t k, std::size_t* min_budget) {
    const std::size_t n = pi_order.size(), N = rho.size(), K = k + 1;
    // prev/cur hold DP[i-1][*][*] and DP[i][*][*], indexed (j * K + b)
    std::vector<int> prev((N + 1) * K, 0), cur((N + 1) * K, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t t = pi_order[i - 1];
        std::fill(cur.begin(), cur.begin() + static_cast<long>(K), 0);
        for (std::size_t j = 1; j <= N; ++j) {
            int* c = &cur[j * K];
            const int* up = &prev[j * K];
            const int* left = &cur[(j - 1) * K];
            const int* diag = &prev[(j - 1) * K];
            const bool match = rho[j - 1].first == t;
            const std::size_t cost = rho[j - 1].second >= 1 ? 1 : 0;
            for (std::size_t b = 0; b < K; ++b) {
                int v = std::max(up[b], left[b]);
                if (match && b >= cost) v = std::max(v, diag[b - cost] + 1);
                c[b] = v;
            }
        }
        std::swap(prev, cur);
    }
    const int* last = &prev[N * K];
    if (min_budget) {
        std::size_t b = 0;
        while (b < k && last[b] < last[k]) ++b;
        *min_budget = b;
    }
    return static_cast<std::size_t>(last[k]);
}

MgMatch mg_lcs_reconstruct(const std::vector<std::size_t>& pi_order, const std::vector<std::pair<std::size_t, int>>& rho,
                           std::size_t k) {
    const std::size_t n = pi_order.size(), N = rho.size(), K = k + 1;
    std::vector<int> D((n + 1) * (N + 1) * K, 0);
    auto at = [&](std::size_t i, std::size_t j, std::size_t b) -> int& { return D[(i * (N + 1) + j) * K + b]; };
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= N; ++j) {
            const bool match = rho[j - 1].first == pi_order[i - 1];
            const std::size_t cost = rho[j - 1].second >= 1 ? 1 : 0;
            for (std::size_t b = 0; b < K; ++b) {
                int v = std::max(at(i - 1, j, b), at(i, j - 1, b));
                if (match && b >= cost) v = std::max(v, at(i - 1, j - 1, b - cost) + 1);
                at(i, j, b) = v;
            }
        }
    MgMatch m;
    m.length = static_cast<std::size_t>(at(n, N, k));
    std::size_t b = 0;
    while (b < k && static_cast<std::size_t>(at(n, N, b)) < m.length) ++b;
    m.budget = b;
    std::size_t i = n, j = N;
    while (i > 0 && j > 0) {
        int v = at(i, j, b);
        if (v == 0) break;
        if (v == at(i - 1, j, b)) {
            --i;
        } else if (v == at(i, j - 1, b)) {
            --j;
        } else {
            const int lab = rho[j - 1].second;
            m.matches.emplace_back(pi_order[i - 1], lab);
            if (lab >= 1) --b;
            --i;
            --j;
        }
    }
    std::reverse(m.matches.begin(), m.matches.end());
    return m;
}

}  // namespace detail

LcsResult budgeted_multigroup_lcs(const Ranking& pi, const std::vector<std::pair<std::string, int>>& rho_aug,
                                  std::size_t g, std::size_t k) {
    const std::size_t n = pi.size();
    std::unordered_map<std::string, std::size_t> idx;
    for (std::size_t p = 0; p < n; ++p)
        if (!idx.emplace(pi.order[p], p).second) throw ContractError("budgeted_multigroup_lcs: pi repeats an id");
    if (rho_aug.size() != n * (g + 1))
        throw ContractError("budgeted_multigroup_lcs: rho_aug must hold (g+1) copies of every id");
    std::set<std::pair<std::size_t, int>> seen;
    std::vector<std::pair<std::size_t, int>> rho;
    rho.reserve(rho_aug.size());
    for (const auto& [id, lab] : rho_aug) {
        auto it = idx.find(id);
        if (it == idx.end()) throw ContractError("budgeted_multigroup_lcs: unknown id " + id);
        if (lab < 0 || static_cast<std::size_t>(lab) > g)
            throw ContractError("budgeted_multigroup_lcs: copy label out of range");
        if (!seen.emplace(it->second, lab).second)
            throw ContractError("budgeted_multigroup_lcs: duplicate copy (" + id + "," + std::to_string(lab) + ")");
        rho.emplace_back(it->second, lab);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t p = 0; p < n; ++p) order[p] = p;
    auto m = detail::mg_lcs_reconstruct(order, rho, k);
    LcsResult r;
    r.length = m.length;
    r.budget_used = m.budget;
    for (auto [t, lab] : m.matches) {
        r.kept.push_back(pi.order[t]);
        if (lab >= 1) r.assignment[pi.order[t]] = lab;
    }
    return r;
}

}  // namespace bonusrank
