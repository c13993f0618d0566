#include "bonusrank/skyline.hpp"

#include <algorithm>
#include <numeric>

namespace bonusrank {

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return false;
        if (a[j] > b[j]) strict = true;
    }
    return strict;
}

namespace {

constexpr long kNone = -1;

// best[p] = largest pi position of a dominator of the tuple at position p, or kNone.
std::vector<long> witnesses_pairwise(const Dataset& ds, const std::vector<std::size_t>& order) {
    const std::size_t n = order.size();
    std::vector<long> best(n, kNone);
    for (std::size_t p = 0; p < n; ++p) {
        auto b = ds.row(order[p]);
        for (std::size_t q = n; q-- > p + 1;)
            if (dominates(ds.row(order[q]), b)) {
                best[p] = static_cast<long>(q);
                break;
            }
    }
    return best;
}

struct MaxFenwick {
    std::vector<long> t;
    explicit MaxFenwick(std::size_t n) : t(n + 1, kNone) {}
    // indices are 1-based; suffix queries are served by mirroring
    void update(std::size_t i, long v) {
        for (; i < t.size(); i += i & (~i + 1)) t[i] = std::max(t[i], v);
    }
    long prefix(std::size_t i) const {
        long r = kNone;
        for (; i > 0; i -= i & (~i + 1)) r = std::max(r, t[i]);
        return r;
    }
};

std::vector<long> witnesses_sweep_1d(const Dataset& ds, const std::vector<std::size_t>& order) {
    const std::size_t n = order.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return ds.value(order[a], 0) > ds.value(order[b], 0); });
    std::vector<long> best(n, kNone);
    long acc = kNone;
    for (std::size_t a = 0; a < n;) {
        std::size_t b = a;
        double x = ds.value(order[idx[a]], 0);
        while (b < n && ds.value(order[idx[b]], 0) == x) ++b;
        for (std::size_t c = a; c < b; ++c) best[idx[c]] = acc;
        for (std::size_t c = a; c < b; ++c) acc = std::max(acc, static_cast<long>(idx[c]));
        a = b;
    }
    return best;
}

// Dominance = (x > bx, y >= by) or (x >= bx, y > by); one sweep over x descending
// answers both halves.
std::vector<long> witnesses_sweep_2d(const Dataset& ds, const std::vector<std::size_t>& order) {
    const std::size_t n = order.size();
    auto X = [&](std::size_t p) { return ds.value(order[p], 0); };
    auto Y = [&](std::size_t p) { return ds.value(order[p], 1); };

    std::vector<double> ys(n);
    for (std::size_t p = 0; p < n; ++p) ys[p] = Y(p);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const std::size_t m = ys.size();
    // mirrored rank: larger y -> smaller index, so "y >= by" is a prefix
    auto mrank = [&](double y) {
        return m - static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
    };

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return X(a) > X(b); });

    MaxFenwick tree(m);
    std::vector<long> best(n, kNone);
    for (std::size_t a = 0; a < n;) {
        std::size_t b = a;
        while (b < n && X(idx[b]) == X(idx[a])) ++b;
        // strictly larger x already inserted: y >= by
        for (std::size_t c = a; c < b; ++c) best[idx[c]] = tree.prefix(mrank(Y(idx[c])));
        // equal x: need y > by, among the block itself
        std::vector<std::size_t> blk(idx.begin() + static_cast<long>(a), idx.begin() + static_cast<long>(b));
        std::sort(blk.begin(), blk.end(), [&](auto u, auto v) { return Y(u) > Y(v); });
        long acc = kNone;
        for (std::size_t s = 0; s < blk.size();) {
            std::size_t e = s;
            while (e < blk.size() && Y(blk[e]) == Y(blk[s])) ++e;
            for (std::size_t c = s; c < e; ++c) best[blk[c]] = std::max(best[blk[c]], acc);
            for (std::size_t c = s; c < e; ++c) acc = std::max(acc, static_cast<long>(blk[c]));
            s = e;
        }
        for (std::size_t c = a; c < b; ++c) tree.update(mrank(Y(idx[c])), static_cast<long>(idx[c]));
        a = b;
    }
    return best;
}

}  // namespace

std::vector<DominanceRecord> forced_bonus_tuples(const Dataset& ds, const Ranking& pi, SkylineMethod method) {
    auto order = ranking_indices(ds, pi);
    if (method == SkylineMethod::Sweep && ds.d() > 2)
        throw ContractError("forced_bonus_tuples: the sweep kernel handles d <= 2 only");
    if (method == SkylineMethod::Auto)
        method = (ds.d() <= 2 && ds.n() > 2000) ? SkylineMethod::Sweep : SkylineMethod::Pairwise;

    std::vector<DominanceRecord> out;
    std::vector<std::size_t> active = order;  // row indices in pi order
    for (std::size_t iter = 1;; ++iter) {
        std::vector<long> best;
        if (method == SkylineMethod::Pairwise)
            best = witnesses_pairwise(ds, active);
        else if (ds.d() == 1)
            best = witnesses_sweep_1d(ds, active);
        else
            best = witnesses_sweep_2d(ds, active);
        std::vector<std::size_t> next;
        std::size_t found = 0;
        for (std::size_t p = 0; p < active.size(); ++p) {
            if (best[p] != kNone && static_cast<std::size_t>(best[p]) > p) {
                out.push_back({ds.id(active[p]), ds.id(active[static_cast<std::size_t>(best[p])]), iter});
                ++found;
            } else {
                next.push_back(active[p]);
            }
        }
        if (found == 0) break;
        active = std::move(next);
    }
    std::sort(out.begin(), out.end(),
              [](const DominanceRecord& a, const DominanceRecord& b) { return a.forced_id < b.forced_id; });
    return out;
}

}  // namespace bonusrank
