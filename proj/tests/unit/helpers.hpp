#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bonusrank/core.hpp"

namespace testutil {

inline bonusrank::Dataset admissions() {
    return bonusrank::Dataset({"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"},
                              {{9.8, 2.0}, {8.1, 7.8}, {7.2, 8.6}, {6.9, 4.2}, {6.0, 3.2}, {3.7, 7.1}, {5.1, 8.0},
                               {4.5, 3.5}},
                              {"test", "sat"});
}

inline bonusrank::Ranking admissions_pi() { return {{"c2", "c3", "c1", "c5", "c6", "c7", "c4", "c8"}}; }

inline bonusrank::Explanation admissions_certificate() {
    bonusrank::Explanation e;
    e.weights = {2.0, 1.0};
    e.groups = {{{"c5", "c6", "c8"}, 5.0}};
    return e;
}

inline std::string data_path(const std::string& name) { return std::string(BONUSRANK_TEST_DATA) + "/" + name; }

// Random dataset with ids t0..t{n-1}; values on a coarse grid when `grid` > 0 to provoke ties.
inline bonusrank::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, int grid = 0) {
    std::uniform_real_distribution<double> U(0.0, 10.0);
    std::uniform_int_distribution<int> G(0, grid > 0 ? grid : 1);
    std::vector<std::string> ids;
    std::vector<double> vals;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("t" + std::to_string(i));
        for (std::size_t j = 0; j < d; ++j) vals.push_back(grid > 0 ? double(G(rng)) : U(rng));
    }
    return bonusrank::Dataset(ids, vals, d);
}

inline bonusrank::Ranking random_ranking(std::mt19937_64& rng, const bonusrank::Dataset& ds) {
    bonusrank::Ranking r{ds.ids()};
    std::shuffle(r.order.begin(), r.order.end(), rng);
    return r;
}

}  // namespace testutil

#include "bonusrank/lpsolve.hpp"

namespace testutil {

// Does some weight vector plus one shared bonus v on `boosted` rows put pi in order?
// Every consecutive pair must clear `margin`; s, when set, is maximized instead and
// the result is s > 1e-7 (with w_j >= s, v >= s, sum w + v = 1; v left out when !shared).
struct GroupLp {
    double margin = 0.0;      // fixed margin, used when !maximize_slack
    bool maximize_slack = false;
    double w_lo = 0.0, w_hi = bonusrank::kInf;
    double v_hi = bonusrank::kInf;
    std::vector<int> signs;   // optional: +1 forces w_j >= 1, -1 forces w_j <= -1
    bool shared = true;       // false: every boosted row gets its own free bonus
};

inline bool group_feasible(const bonusrank::Dataset& ds, const std::vector<std::size_t>& pi_order,
                           const std::vector<char>& boosted, const GroupLp& o) {
    using namespace bonusrank;
    const std::size_t d = ds.d(), n = ds.n();
    std::vector<std::size_t> vcol(n, 0);
    std::size_t nv = d;
    if (o.shared) {
        for (std::size_t i = 0; i < n; ++i) vcol[i] = d;
        ++nv;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (boosted[i]) vcol[i] = nv++;
    }
    const std::size_t sc = nv;
    if (o.maximize_slack) ++nv;
    LinearProgram lp(nv);
    for (std::size_t j = 0; j < d; ++j) lp.set_bounds(j, o.w_lo, o.w_hi);
    for (std::size_t c = d; c < sc; ++c) lp.set_bounds(c, o.shared ? 0.0 : -kInf, o.shared ? o.v_hi : kInf);
    for (std::size_t j = 0; j < o.signs.size(); ++j) {
        std::vector<double> row(nv, 0.0);
        row[j] = 1.0;
        lp.add_row(row, o.signs[j] > 0 ? Relation::GreaterEq : Relation::LessEq, o.signs[j] > 0 ? 1.0 : -1.0);
    }
    if (o.maximize_slack) {
        lp.set_bounds(sc, -1.0, 1.0);
        lp.sense = Sense::Maximize;
        lp.objective[sc] = 1.0;
        const std::size_t pos_cols = o.shared ? sc : d;
        std::vector<double> norm(nv, 0.0);
        for (std::size_t c = 0; c < pos_cols; ++c) norm[c] = 1.0;
        lp.add_row(norm, Relation::Equal, 1.0);
        for (std::size_t c = 0; c < pos_cols; ++c) {
            std::vector<double> row(nv, 0.0);
            row[c] = 1.0;
            row[sc] = -1.0;
            lp.add_row(row, Relation::GreaterEq, 0.0);
        }
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
        std::size_t a = pi_order[p], b = pi_order[p + 1];
        std::vector<double> row(nv, 0.0);
        for (std::size_t j = 0; j < d; ++j) row[j] = ds.value(a, j) - ds.value(b, j);
        if (boosted[a]) row[vcol[a]] += 1.0;
        if (boosted[b]) row[vcol[b]] -= 1.0;
        if (o.maximize_slack) row[sc] = -1.0;
        lp.add_row(row, Relation::GreaterEq, o.maximize_slack ? 0.0 : o.margin);
    }
    auto r = solve_lp(lp);
    if (r.status == LpStatus::Unbounded) return true;
    if (r.status != LpStatus::Optimal) return false;
    return o.maximize_slack ? r.value > 1e-7 : true;
}

}  // namespace testutil
