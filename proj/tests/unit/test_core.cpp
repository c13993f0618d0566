#include <doctest.h>

#include <cmath>

#include "bonusrank/core.hpp"
#include "helpers.hpp"

using namespace bonusrank;

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(Dataset({"a", "a"}, {{1.0}, {2.0}}), ContractError);
    CHECK_THROWS_AS(Dataset({"a", "b"}, {{1.0}, {NAN}}), ContractError);
    CHECK_THROWS_AS(Dataset({"a", "b"}, {{1.0, 2.0}, {3.0}}), ContractError);
    CHECK_THROWS_AS(Dataset({}, std::vector<std::vector<double>>{}), ContractError);
    CHECK_THROWS_AS(Dataset({""}, {{1.0}}), ContractError);
    Dataset ds({"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}});
    CHECK(ds.attr_names() == std::vector<std::string>{"a1", "a2"});
    CHECK(ds.index("b") == 1);
    CHECK_THROWS_AS(ds.index("zz"), ContractError);
    CHECK(ds.value(1, 0) == 3.0);
}

TEST_CASE("linear score") {
    std::vector<double> w{2, 1}, t{8.1, 7.8};
    CHECK(linear_score(w, t) == doctest::Approx(24.0).epsilon(1e-15));
    std::vector<double> z{0, 0};
    CHECK(linear_score(z, t) == 0.0);
    std::vector<double> one{1, 1}, c4{6.9, 4.2};
    CHECK(linear_score(one, c4) == doctest::Approx(11.1));
    std::vector<double> bad{1};
    CHECK_THROWS_AS(linear_score(bad, t), ContractError);
    std::vector<double> inf{INFINITY, 1};
    CHECK_THROWS_AS(linear_score(inf, t), ContractError);
}

TEST_CASE("bonus score") {
    auto e = testutil::admissions_certificate();
    std::vector<double> c5{6.0, 3.2}, c8{4.5, 3.5}, c1{9.8, 2.0};
    CHECK(bonus_score(e, "c5", c5) == doctest::Approx(20.2));
    CHECK(bonus_score(e, "c8", c8) == doctest::Approx(17.5));
    CHECK(bonus_score(e, "c1", c1) == doctest::Approx(21.6));
    Explanation none;
    none.weights = {2, 1};
    CHECK(bonus_score(none, "c5", c5) == linear_score(none.weights, c5));
    e.groups.push_back({{"c5"}, 1.0});
    CHECK_THROWS_AS(bonus_score(e, "c5", c5), InvariantError);
}

TEST_CASE("verify the table certificate") {
    auto ds = testutil::admissions();
    auto rep = verify_realization(ds, testutil::admissions_pi(), testutil::admissions_certificate());
    CHECK(rep.ok);
    // adjusted scores 24, 23, 21.6, 20.2, 19.5, 18.2, 18.0, 17.5: tightest gap c7 -> c4
    CHECK(std::abs(rep.min_gap - 0.2) <= 1e-9);
    CHECK_FALSE(rep.first_violation);

    auto strict = testutil::admissions_certificate();
    strict.regime = Regime::strict_eps(0.2);
    CHECK(verify_realization(ds, testutil::admissions_pi(), strict).ok);
    strict.regime = Regime::strict_eps(0.21);
    CHECK_FALSE(verify_realization(ds, testutil::admissions_pi(), strict).ok);
}

TEST_CASE("verify catches the missing bonus") {
    auto ds = testutil::admissions();
    Explanation e;
    e.weights = {2, 1};
    auto rep = verify_realization(ds, testutil::admissions_pi(), e);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.first_violation);
    // plain scores along pi: 24, 23, 21.6, 15.2, 14.5, 18.2, ...; first rise is c6 -> c7
    CHECK(rep.first_violation->first == "c6");
    CHECK(rep.first_violation->second == "c7");
    CHECK(rep.min_gap < 0);
}

TEST_CASE("verify contract and edge cases") {
    auto ds = testutil::admissions();
    Ranking short_pi{{"c1", "c2"}};
    CHECK_THROWS_AS(verify_realization(ds, short_pi, testutil::admissions_certificate()), ContractError);
    Explanation bad = testutil::admissions_certificate();
    bad.groups[0].members.push_back("nobody");
    CHECK_THROWS(verify_realization(ds, testutil::admissions_pi(), bad));

    Dataset same({"a", "b", "c"}, {{1, 1}, {1, 1}, {1, 1}});
    Explanation zero;
    zero.weights = {0, 0};
    CHECK(verify_realization(same, {{"c", "a", "b"}}, zero).ok);
}

TEST_CASE("ranking from weights") {
    auto ds = testutil::admissions();
    std::vector<double> w{2, 1};
    auto r = ranking_from_weights(ds, w);
    CHECK(r.order == std::vector<std::string>{"c2", "c3", "c1", "c7", "c4", "c5", "c6", "c8"});

    Dataset one({"x"}, {{3.0}});
    std::vector<double> w1{1};
    CHECK(ranking_from_weights(one, w1).order == std::vector<std::string>{"x"});

    Dataset twins({"b", "a"}, {{1, 2}, {1, 2}});
    std::vector<double> w2{0.3, 0.7};
    CHECK(ranking_from_weights(twins, w2).order == std::vector<std::string>{"a", "b"});
    CHECK(ranking_from_weights(twins, w2, TiePolicy::DatasetOrder).order == std::vector<std::string>{"b", "a"});
}

TEST_CASE("weights always realize their own ranking") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        auto ds = testutil::random_dataset(rng, 2 + rep % 15, 1 + rep % 4, rep % 3 == 0 ? 3 : 0);
        std::normal_distribution<double> N;
        std::vector<double> w(ds.d());
        for (auto& x : w) x = N(rng);
        Explanation e;
        e.weights = w;
        CHECK(verify_realization(ds, ranking_from_weights(ds, w), e).ok);
    }
}

TEST_CASE("strict verification is monotone in epsilon") {
    auto ds = testutil::admissions();
    auto e = testutil::admissions_certificate();
    bool prev = true;
    for (double eps : {1e-6, 0.05, 0.1, 0.19, 0.2, 0.2000001, 0.3, 1.0}) {
        e.regime = Regime::strict_eps(eps);
        bool ok = verify_realization(ds, testutil::admissions_pi(), e).ok;
        if (!prev) CHECK_FALSE(ok);
        prev = ok;
    }
    CHECK_FALSE(prev);
}

TEST_CASE("normalize descending attribute") {
    Dataset ds({"a", "b", "c"}, {{10, 1}, {20, 1}, {40, 1}});
    auto n = normalize_descending_attribute(ds, 0);
    CHECK(n.value(0, 0) == 1.0);
    CHECK(n.value(1, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(n.value(2, 0) == 0.0);
    CHECK(n.value(0, 1) == 1.0);
    CHECK_THROWS_AS(normalize_descending_attribute(ds, 1), DegenerateColumnError);
    CHECK_THROWS_AS(normalize_descending_attribute(ds, 2), ContractError);

    Dataset two({"a", "b"}, {{0}, {1}});
    auto t = normalize_descending_attribute(two, 0);
    CHECK(t.value(0, 0) == 1.0);
    CHECK(t.value(1, 0) == 0.0);

    // twice: same order as the original column
    std::mt19937_64 rng(3);
    auto r = testutil::random_dataset(rng, 30, 1);
    auto rr = normalize_descending_attribute(normalize_descending_attribute(r, 0), 0);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j)
            CHECK((r.value(i, 0) < r.value(j, 0)) == (rr.value(i, 0) < rr.value(j, 0)));
}

TEST_CASE("problem spec and regime") {
    CHECK_THROWS_AS(Regime::strict_eps(0.0), ContractError);
    ProblemSpec p;
    p.variant = Variant::Multigroup;
    p.g = 0;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.g = 2;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("positions and indices") {
    auto ds = testutil::admissions();
    auto idx = ranking_indices(ds, testutil::admissions_pi());
    CHECK(idx[0] == 1);
    auto pos = positions_of(idx);
    CHECK(pos[1] == 0);
    CHECK(pos[7] == 7);
    Ranking dup{{"c1", "c1", "c2", "c3", "c4", "c5", "c6", "c7"}};
    CHECK_THROWS_AS(ranking_indices(ds, dup), ContractError);
}
