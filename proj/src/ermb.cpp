#include "bonusrank/ermb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bonusrank/io.hpp"
#include "bonusrank/sequence.hpp"

namespace bonusrank {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Limit: return "limit";
    }
    return "?";
}

AugmentedDataset augment(const Dataset& ds, std::size_t g) {
    AugmentedDataset a;
    a.base = ds;
    a.g = g;
    const std::size_t d = ds.d();
    std::vector<std::string> ids;
    std::vector<double> vals;
    ids.reserve(ds.n() * (g + 1));
    vals.reserve(ds.n() * (g + 1) * (d + g));
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t l = 0; l <= g; ++l) {
            ids.push_back(ds.id(i) + "#" + std::to_string(l));
            auto r = ds.row(i);
            vals.insert(vals.end(), r.begin(), r.end());
            for (std::size_t b = 1; b <= g; ++b) vals.push_back(b == l ? 1.0 : 0.0);
            a.copy_of.emplace_back(i, static_cast<int>(l));
        }
    std::vector<std::string> names = ds.attr_names();
    for (std::size_t b = 1; b <= g; ++b) names.push_back("bonus" + std::to_string(b));
    a.tuples = Dataset(std::move(ids), std::move(vals), d + g, std::move(names));
    return a;
}

std::vector<Group> singleton_bonuses(const Dataset& ds, const std::vector<std::size_t>& pi_order,
                                     const std::vector<char>& kept, const std::vector<double>& w) {
    const std::size_t n = pi_order.size();
    std::vector<double> s(n), adj(n);
    for (std::size_t p = 0; p < n; ++p) s[p] = linear_score(w, ds.row(pi_order[p]));
    std::size_t last = n;
    for (std::size_t p = n; p-- > 0;)
        if (kept[p]) {
            last = p;
            break;
        }
    if (last == n) throw ContractError("singleton_bonuses: nothing kept");
    for (std::size_t p = last + 1; p < n; ++p) adj[p] = s[last];
    for (std::size_t p = last + 1; p-- > 0;) adj[p] = kept[p] ? s[p] : adj[p + 1];
    std::vector<Group> groups;
    for (std::size_t p = 0; p < n; ++p) {
        if (kept[p]) continue;
        double b = adj[p] - s[p];
        if (b == 0.0) continue;
        groups.push_back({{ds.id(pi_order[p])}, b});
    }
    return groups;
}

namespace {

// Identical tuples tie under every weight vector; order each such block by pi so that
// ties never count as inversions.
void settle_duplicates(std::vector<std::size_t>& order, const std::vector<std::size_t>& cls,
                       const std::vector<std::size_t>& key) {
    std::size_t a = 0;
    while (a < order.size()) {
        std::size_t b = a + 1;
        while (b < order.size() && cls[order[b]] == cls[order[a]]) ++b;
        if (b - a > 1)
            std::sort(order.begin() + static_cast<long>(a), order.begin() + static_cast<long>(b),
                      [&](std::size_t x, std::size_t y) { return key[x] < key[y]; });
        a = b;
    }
}

const char* quadrant_name(Quadrant q) { return q == Quadrant::Positive ? "positive" : "full"; }

struct Deadline {
    double limit;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool hit = false;
    bool expired() {
        if (limit > 0.0 && std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= limit)
            hit = true;
        return hit;
    }
};

}  // namespace

ErmbResult explain_singleton(const Dataset& ds, const Ranking& pi, std::size_t k, Quadrant quadrant,
                             const ErmbOptions& opt) {
    auto pi_order = ranking_indices(ds, pi);
    const std::size_t n = ds.n();
    auto pos_pi = positions_of(pi_order);
    auto dup = duplicate_classes(ds);

    std::size_t best_len = 0;
    std::vector<double> best_w;
    std::vector<std::size_t> best_order, best_pos;
    std::vector<int> relabel(n);
    std::vector<std::size_t> ord;
    RegionOptions ropt;
    ropt.max_regions = opt.max_regions;

    ErmbResult res;
    Deadline clock{opt.time_limit};
    res.stats = enumerate_regions(
        ds, quadrant,
        [&](const SignRegion& r) {
            if (clock.expired()) return false;
            ++res.regions;
            ord = r.order;
            settle_duplicates(ord, dup, pos_pi);
            for (std::size_t p = 0; p < n; ++p) relabel[p] = static_cast<int>(pos_pi[ord[p]]) + 1;
            std::size_t len = lis_length(relabel);
            if (len < best_len) return true;
            auto pos = positions_of(ord);
            if (len == best_len && compare_sign_vectors(pos, best_pos, dup) >= 0) return true;
            best_len = len;
            best_w = r.witness;
            best_order = ord;
            best_pos = std::move(pos);
            return true;
        },
        ropt);
    if (clock.hit) {
        res.status = SolveStatus::Limit;
        return res;
    }
    if (best_order.empty()) throw InternalConsistencyError("explain_singleton: no region was enumerated");

    for (std::size_t p = 0; p < n; ++p) relabel[p] = static_cast<int>(pos_pi[best_order[p]]) + 1;
    auto L = lis(relabel);
    std::vector<char> kept(n, 0);
    for (int v : L.kept) kept[static_cast<std::size_t>(v - 1)] = 1;

    Explanation e;
    e.weights = best_w;
    e.groups = singleton_bonuses(ds, pi_order, kept, best_w);
    e.regime = Regime::non_strict();
    e.provenance = {"ermb-singleton",
                    {{"k", std::to_string(k)}, {"quadrant", quadrant_name(quadrant)},
                     {"regions", std::to_string(res.regions)}}};
    auto rep = verify_realization(ds, pi, e);
    if (!rep.ok) throw InternalConsistencyError("explain_singleton: explanation fails verification");

    res.min_k = n - L.length;
    res.status = *res.min_k <= k ? SolveStatus::Feasible : SolveStatus::Infeasible;
    res.explanation = std::move(e);
    return res;
}

ErmbResult explain_multigroup(const Dataset& ds, const Ranking& pi, std::size_t g, std::size_t k, Quadrant quadrant,
                              const ErmbOptions& opt) {
    if (g < 1) throw ContractError("explain_multigroup: g must be >= 1");
    if (ds.d() + g > opt.dim_cap)
        throw RefusalError("explain_multigroup: d + g = " + std::to_string(ds.d() + g) + " exceeds the cap of " +
                           std::to_string(opt.dim_cap) + "; use the MILP solvers instead");
    auto pi_order = ranking_indices(ds, pi);
    const std::size_t n = ds.n(), d = ds.d();
    auto pos_pi = positions_of(pi_order);
    auto aug = augment(ds, g);
    auto dup = duplicate_classes(aug.tuples);
    std::vector<std::size_t> key(aug.tuples.n());
    for (std::size_t r = 0; r < key.size(); ++r) key[r] = pos_pi[aug.copy_of[r].first];

    Cone cone = cone_for(quadrant, d + g);
    for (std::size_t b = d; b < d + g; ++b) cone.positive[b] = true;

    std::size_t best_len = 0, best_budget = 0;
    bool have = false;
    std::vector<double> best_w;
    std::vector<std::size_t> best_order, best_pos, ord;
    std::vector<std::pair<std::size_t, int>> rho(aug.tuples.n());
    RegionOptions ropt;
    ropt.max_regions = opt.max_regions;

    ErmbResult res;
    Deadline clock{opt.time_limit};
    res.stats = enumerate_regions(
        aug.tuples, cone,
        [&](const SignRegion& r) {
            if (clock.expired()) return false;
            ++res.regions;
            ord = r.order;
            settle_duplicates(ord, dup, key);
            for (std::size_t j = 0; j < ord.size(); ++j) rho[j] = aug.copy_of[ord[j]];
            std::size_t budget = 0;
            std::size_t len = detail::mg_lcs_length(pi_order, rho, k, &budget);
            if (have) {
                if (len < best_len) return true;
                if (len == best_len && budget > best_budget) return true;
            }
            auto pos = positions_of(ord);
            if (have && len == best_len && budget == best_budget && compare_sign_vectors(pos, best_pos, dup) >= 0)
                return true;
            have = true;
            best_len = len;
            best_budget = budget;
            best_w = r.witness;
            best_order = ord;
            best_pos = std::move(pos);
            return true;
        },
        ropt);

    ErmbResult& out = res;
    if (clock.hit) {
        out.status = SolveStatus::Limit;
        return out;
    }
    if (!have || best_len < n) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    for (std::size_t j = 0; j < best_order.size(); ++j) rho[j] = aug.copy_of[best_order[j]];
    auto m = detail::mg_lcs_reconstruct(pi_order, rho, k);

    Explanation e;
    e.weights.assign(best_w.begin(), best_w.begin() + static_cast<long>(d));
    for (std::size_t r = 1; r <= g; ++r) {
        Group gr;
        gr.bonus = best_w[d + r - 1];
        for (auto [t, lab] : m.matches)
            if (lab == static_cast<int>(r)) gr.members.push_back(ds.id(t));
        if (!gr.members.empty()) e.groups.push_back(std::move(gr));
    }
    e.regime = Regime::non_strict();
    e.provenance = {"ermb-multigroup",
                    {{"g", std::to_string(g)}, {"k", std::to_string(k)}, {"quadrant", quadrant_name(quadrant)},
                     {"regions", std::to_string(res.regions)}}};
    auto rep = verify_realization(ds, pi, e);
    if (!rep.ok) throw InternalConsistencyError("explain_multigroup: explanation fails verification");
    out.status = SolveStatus::Feasible;
    out.explanation = std::move(e);
    return out;
}

}  // namespace bonusrank
