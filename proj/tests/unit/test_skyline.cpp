#include <doctest.h>

#include "bonusrank/skyline.hpp"
#include "helpers.hpp"

using namespace bonusrank;

namespace {

// Direct definition: t is forced when something below it in pi dominates it.
std::vector<DominanceRecord> oracle(const Dataset& ds, const Ranking& pi) {
    auto order = ranking_indices(ds, pi);
    std::vector<DominanceRecord> out;
    for (std::size_t p = 0; p < order.size(); ++p) {
        std::string witness;
        for (std::size_t q = p + 1; q < order.size(); ++q) {
            auto a = ds.row(order[q]), b = ds.row(order[p]);
            bool ge = true, gt = false;
            for (std::size_t j = 0; j < ds.d(); ++j) {
                ge = ge && a[j] >= b[j];
                gt = gt || a[j] > b[j];
            }
            if (ge && gt) witness = ds.id(order[q]);
        }
        if (!witness.empty()) out.push_back({ds.id(order[p]), witness, 1});
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.forced_id < y.forced_id; });
    return out;
}

}  // namespace

TEST_CASE("dominates") {
    std::vector<double> a{2, 2}, b{1, 2}, c{2, 2};
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK_FALSE(dominates(a, c));
}

TEST_CASE("admissions example forced tuples") {
    auto recs = forced_bonus_tuples(testutil::admissions(), testutil::admissions_pi());
    REQUIRE(recs.size() == 2);
    CHECK(recs[0] == DominanceRecord{"c5", "c4", 1});
    CHECK(recs[1] == DominanceRecord{"c6", "c7", 1});
}

TEST_CASE("pairwise and sweep match the direct definition") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        std::size_t d = 1 + t % 3;
        auto ds = testutil::random_dataset(rng, 1 + rng() % 60, d, t % 2 ? 4 : 0);
        auto pi = testutil::random_ranking(rng, ds);
        auto want = oracle(ds, pi);
        CHECK(forced_bonus_tuples(ds, pi, SkylineMethod::Pairwise) == want);
        CHECK(forced_bonus_tuples(ds, pi) == want);
        if (d <= 2) CHECK(forced_bonus_tuples(ds, pi, SkylineMethod::Sweep) == want);
    }
}

TEST_CASE("sweep on a larger instance") {
    std::mt19937_64 rng(32);
    auto ds = testutil::random_dataset(rng, 3000, 2, 50);
    auto pi = testutil::random_ranking(rng, ds);
    CHECK(forced_bonus_tuples(ds, pi, SkylineMethod::Sweep) == forced_bonus_tuples(ds, pi, SkylineMethod::Pairwise));
}

TEST_CASE("sweep refuses d > 2") {
    std::mt19937_64 rng(33);
    auto ds = testutil::random_dataset(rng, 5, 3);
    CHECK_THROWS_AS(forced_bonus_tuples(ds, testutil::random_ranking(rng, ds), SkylineMethod::Sweep), ContractError);
}

// Forced tuples cannot be kept under any non-negative weights: a uniform scan finds
// each one out of order relative to its witness.
TEST_CASE("no false positives") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 20; ++t) {
        auto ds = testutil::random_dataset(rng, 40, 2);
        auto pi = testutil::random_ranking(rng, ds);
        for (auto& rec : forced_bonus_tuples(ds, pi)) {
            auto a = ds.row(ds.index(rec.witness_id)), b = ds.row(ds.index(rec.forced_id));
            for (int s = 0; s <= 100; ++s) {
                std::vector<double> w{s / 100.0, 1 - s / 100.0};
                CHECK(linear_score(w, a) >= linear_score(w, b));
            }
        }
    }
}
