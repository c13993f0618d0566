#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "bonusrank/sequence.hpp"

using namespace bonusrank;

namespace {

std::size_t lis_quadratic(const std::vector<int>& a) {
    std::vector<std::size_t> best(a.size(), 1);
    std::size_t out = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (a[j] < a[i]) best[i] = std::max(best[i], best[j] + 1);
        out = std::max(out, best[i]);
    }
    return out;
}

// Exhaustive over all pairs of prefixes with memo on (i, j, budget).
std::size_t mg_brute(const std::vector<std::size_t>& pi, const std::vector<std::pair<std::size_t, int>>& rho,
                     std::size_t k) {
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t, std::size_t)> f = [&](std::size_t i, std::size_t j,
                                                                            std::size_t b) -> std::size_t {
        if (i == pi.size() || j == rho.size()) return 0;
        auto key = std::make_tuple(i, j, b);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::size_t r = std::max(f(i + 1, j, b), f(i, j + 1, b));
        if (pi[i] == rho[j].first) {
            std::size_t cost = rho[j].second > 0 ? 1 : 0;
            if (cost <= b) r = std::max(r, 1 + f(i + 1, j + 1, b - cost));
        }
        return memo[key] = r;
    };
    return f(0, 0, k);
}

}  // namespace

TEST_CASE("lis basics") {
    CHECK(lis({}).length == 0);
    CHECK(lis({1}).length == 1);
    auto r = lis({3, 1, 2, 5, 4});
    CHECK(r.length == 3);
    CHECK(r.kept == std::vector<int>{1, 2, 4});
    CHECK_THROWS_AS(lis({1, 1}), ContractError);
    CHECK_THROWS_AS(lis({0, 1}), ContractError);
    CHECK(lis_length({10, -3, 7, 8}) == 3);
}

TEST_CASE("lis matches quadratic DP") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> p(rng() % 60);
        std::iota(p.begin(), p.end(), 1);
        std::shuffle(p.begin(), p.end(), rng);
        auto r = lis(p);
        REQUIRE(r.length == lis_quadratic(p));
        CHECK(lis_length(p) == r.length);
        CHECK(r.kept.size() == r.length);
        CHECK(std::is_sorted(r.kept.begin(), r.kept.end()));
        // kept is a subsequence of p
        std::size_t at = 0;
        for (int v : p)
            if (at < r.kept.size() && v == r.kept[at]) ++at;
        CHECK(at == r.kept.size());
    }
}

TEST_CASE("multigroup LCS matches exhaustive search") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + rng() % 7, g = 1 + rng() % 2, k = rng() % (n + 1);
        std::vector<std::size_t> pi(n);
        std::iota(pi.begin(), pi.end(), 0);
        std::shuffle(pi.begin(), pi.end(), rng);
        std::vector<std::pair<std::size_t, int>> rho;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l <= g; ++l) rho.emplace_back(i, int(l));
        std::shuffle(rho.begin(), rho.end(), rng);

        std::size_t expect = mg_brute(pi, rho, k);
        std::size_t budget = 0;
        CHECK(detail::mg_lcs_length(pi, rho, k, &budget) == expect);
        CHECK(budget <= k);
        auto m = detail::mg_lcs_reconstruct(pi, rho, k);
        CHECK(m.length == expect);
        CHECK(m.budget == budget);
        REQUIRE(m.matches.size() == expect);
        std::size_t used = 0, pi_at = 0, rho_at = 0;
        for (auto [tuple, label] : m.matches) {
            if (label > 0) ++used;
            while (pi_at < n && pi[pi_at] != tuple) ++pi_at;
            CHECK(pi_at < n);
            ++pi_at;
            while (rho_at < rho.size() && rho[rho_at] != std::make_pair(tuple, label)) ++rho_at;
            CHECK(rho_at < rho.size());
            ++rho_at;
        }
        CHECK(used == m.budget);
    }
}

TEST_CASE("string-level multigroup LCS") {
    Ranking pi{{"a", "b", "c"}};
    std::vector<std::pair<std::string, int>> rho{{"b", 0}, {"a", 1}, {"c", 0}, {"a", 0}, {"b", 1}, {"c", 1}};
    auto r0 = budgeted_multigroup_lcs(pi, rho, 1, 0);
    CHECK(r0.length == 2);
    CHECK(r0.budget_used == 0);
    CHECK(budgeted_multigroup_lcs(pi, rho, 1, 1).length == 2);
    auto r2 = budgeted_multigroup_lcs(pi, rho, 1, 2);
    CHECK(r2.length == 3);
    CHECK(r2.kept == std::vector<std::string>{"a", "b", "c"});
    CHECK(r2.budget_used == 2);
    CHECK(r2.assignment.at("b") == 1);
    CHECK(r2.assignment.at("c") == 1);
    CHECK(r2.assignment.count("a") == 0);
}
