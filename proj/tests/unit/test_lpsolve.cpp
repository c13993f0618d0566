#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "bonusrank/lpsolve.hpp"

using namespace bonusrank;

TEST_CASE("textbook maximization") {
    LinearProgram lp(2);
    lp.sense = Sense::Maximize;
    lp.objective = {3, 2};
    lp.add_row({1, 1}, Relation::LessEq, 4);
    lp.add_row({1, 3}, Relation::LessEq, 6);
    lp.set_bounds(0, 0, 3);
    auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(11));
    CHECK(r.x[0] == doctest::Approx(3));
    CHECK(r.x[1] == doctest::Approx(1));
}

TEST_CASE("infeasible and unbounded") {
    LinearProgram a(2);
    a.objective = {1, 1};
    a.add_row({1, 1}, Relation::LessEq, 1);
    a.add_row({1, 1}, Relation::GreaterEq, 2);
    CHECK(solve_lp(a).status == LpStatus::Infeasible);

    LinearProgram b(2);
    b.sense = Sense::Maximize;
    b.objective = {1, 0};
    b.add_row({1, -1}, Relation::LessEq, 1);
    CHECK(solve_lp(b).status == LpStatus::Unbounded);
}

TEST_CASE("equalities and negative bounds") {
    LinearProgram lp(2);
    lp.objective = {1, 1};
    lp.add_row({1, -1}, Relation::Equal, 1);
    lp.set_bounds(0, -5, 5);
    lp.set_bounds(1, -5, 5);
    auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(-9));
    CHECK(r.x[0] == doctest::Approx(-4));
    CHECK(r.x[1] == doctest::Approx(-5));

    LinearProgram f(1);  // free variable
    f.objective = {1};
    f.set_bounds(0, -kInf, kInf);
    f.add_row({1}, Relation::GreaterEq, -7.5);
    auto rf = solve_lp(f);
    REQUIRE(rf.status == LpStatus::Optimal);
    CHECK(rf.x[0] == doctest::Approx(-7.5));
}

// Two-variable LPs on the box [0,10]^2 against vertex enumeration.
TEST_CASE("random 2-variable LPs match vertex enumeration") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    int optimal = 0;
    for (int t = 0; t < 300; ++t) {
        std::vector<std::array<double, 3>> hs;  // a x + b y <= c
        int m = 2 + int(rng() % 5);
        for (int i = 0; i < m; ++i) hs.push_back({U(rng), U(rng), 2 + 6 * U(rng)});
        double c0 = U(rng), c1 = U(rng);

        LinearProgram lp(2);
        lp.objective = {c0, c1};
        for (auto& h : hs) lp.add_row({h[0], h[1]}, Relation::LessEq, h[2]);
        lp.set_bounds(0, 0, 10);
        lp.set_bounds(1, 0, 10);
        auto r = solve_lp(lp);

        auto all = hs;
        all.push_back({1, 0, 10});
        all.push_back({0, 1, 10});
        all.push_back({-1, 0, 0});
        all.push_back({0, -1, 0});
        double best = kInf;
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                double det = all[i][0] * all[j][1] - all[i][1] * all[j][0];
                if (std::abs(det) < 1e-12) continue;
                double x = (all[i][2] * all[j][1] - all[i][1] * all[j][2]) / det;
                double y = (all[i][0] * all[j][2] - all[i][2] * all[j][0]) / det;
                bool ok = true;
                for (auto& h : all) ok = ok && h[0] * x + h[1] * y <= h[2] + 1e-9;
                if (ok) best = std::min(best, c0 * x + c1 * y);
            }
        if (best == kInf) {
            CHECK(r.status == LpStatus::Infeasible);
        } else {
            REQUIRE(r.status == LpStatus::Optimal);
            CHECK(r.value == doctest::Approx(best).epsilon(1e-7));
            CHECK(r.max_violation < 1e-7);
            ++optimal;
        }
    }
    CHECK(optimal > 100);
}

TEST_CASE("sparse and dense forms agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 6;
        LinearProgram lp(n);
        SparseLinearProgram sp(n);
        for (std::size_t j = 0; j < n; ++j) {
            lp.objective[j] = sp.objective[j] = U(rng);
            lp.set_bounds(j, -3, 3);
            sp.lower[j] = -3;
            sp.upper[j] = 3;
        }
        for (int i = 0; i < 5; ++i) {
            std::vector<double> row(n);
            SparseRow s;
            for (std::size_t j = 0; j < n; ++j)
                if (rng() % 2) {
                    row[j] = U(rng);
                    s.terms.emplace_back(j, row[j]);
                }
            double rhs = U(rng);
            Relation rel = i % 3 == 0 ? Relation::GreaterEq : Relation::LessEq;
            lp.add_row(row, rel, rhs);
            s.rel = rel;
            s.rhs = rhs;
            sp.rows.push_back(s);
        }
        auto a = solve_lp(lp), b = solve_lp(sp);
        REQUIRE(a.status == b.status);
        if (a.status == LpStatus::Optimal) {
            CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));
            CHECK(lp_violation(sp, b.x) < 1e-7);
        }
    }
}

TEST_CASE("interior witness") {
    auto r = interior_witness({{1, -1}}, Cone::positive_orthant(2));
    REQUIRE(r.status == WitnessStatus::Found);
    CHECK(r.w[0] > r.w[1]);
    CHECK(r.w[1] > 0);
    CHECK(std::abs(r.w[0]) + std::abs(r.w[1]) == doctest::Approx(1));
    CHECK(r.margin > kInteriorMargin);

    CHECK(interior_witness({{1, -1}, {-1, 1}}, Cone::positive_orthant(2)).status == WitnessStatus::Infeasible);
    // both coordinates must be positive but w1 < 0 is requested
    CHECK(interior_witness({{-1, 0}}, Cone::positive_orthant(2)).status == WitnessStatus::Infeasible);
    auto f = interior_witness({{-1, 0}}, Cone::full(2));
    REQUIRE(f.status == WitnessStatus::Found);
    CHECK(f.w[0] < 0);
}
