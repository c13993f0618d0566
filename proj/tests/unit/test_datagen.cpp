#include <doctest.h>

#include <set>

#include "bonusrank/datagen.hpp"
#include "bonusrank/ermb.hpp"
#include "bonusrank/milp.hpp"
#include "helpers.hpp"

using namespace bonusrank;

TEST_CASE("generator is deterministic") {
    auto a = gen_synthetic(50, 3, 2, 6, Distribution::Zipf, 9);
    auto b = gen_synthetic(50, 3, 2, 6, Distribution::Zipf, 9);
    CHECK(a.dataset.flat() == b.dataset.flat());
    CHECK(a.pi == b.pi);
    CHECK(a.true_weights == b.true_weights);
    CHECK(a.true_bonuses == b.true_bonuses);
    auto c = gen_synthetic(50, 3, 2, 6, Distribution::Zipf, 10);
    CHECK(c.dataset.flat() != a.dataset.flat());
}

TEST_CASE("planted certificate verifies") {
    for (auto dist : {Distribution::Uniform, Distribution::Zipf})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            std::size_t n = 5 + seed * 7, d = 1 + seed % 4, g = 1 + seed % 3, k = seed % 6;
            auto inst = gen_synthetic(n, d, g, k, dist, seed);
            CHECK(inst.dataset.n() == n);
            CHECK(inst.dataset.d() == d);
            CHECK(inst.true_bonuses.size() == g);
            std::size_t members = 0;
            for (auto& gr : inst.true_bonuses) {
                members += gr.members.size();
                CHECK(gr.bonus >= 5.0 * d);
                CHECK(gr.bonus < 10.0 * d);
                CHECK(std::is_sorted(gr.members.begin(), gr.members.end()));
            }
            CHECK(members == k);
            auto e = inst.explanation();
            CHECK(e.bonus_count() == k);
            CHECK(verify_realization(inst.dataset, inst.pi, e).ok);
            std::size_t labeled = 0;
            for (auto& l : *inst.dataset.planted()) labeled += l != "none";
            CHECK(labeled == k);
            for (double x : inst.dataset.flat()) {
                CHECK(x >= 0);
                CHECK(std::round(x * 100) == doctest::Approx(x * 100));
                if (dist == Distribution::Uniform) CHECK(x <= 25.0);
            }
        }
}

TEST_CASE("k = 0 is realizable by the true weights") {
    auto inst = gen_synthetic(40, 2, 1, 0, Distribution::Uniform, 3);
    CHECK(ranking_from_weights(inst.dataset, inst.true_weights) == inst.pi);
    CHECK(explain_singleton(inst.dataset, inst.pi, 0).status == SolveStatus::Feasible);
}

TEST_CASE("ids and distribution names") {
    auto inst = gen_synthetic(3, 1, 1, 1, Distribution::Uniform, 0);
    CHECK(inst.dataset.id(0) == "t0001");
    CHECK(parse_distribution("zipf") == Distribution::Zipf);
    CHECK(std::string(to_string(Distribution::Uniform)) == "uniform");
    CHECK_THROWS(parse_distribution("normal"));
    CHECK_THROWS_AS(gen_synthetic(5, 2, 1, 6, Distribution::Uniform, 0), ContractError);
}

TEST_CASE("2-CNF parsing") {
    auto f = parse_two_cnf_text("c demo\np cnf 3 2\n1 -2 0\n-3 2\n");
    CHECK(f.n_vars == 3);
    CHECK(f.clauses == std::vector<std::pair<int, int>>{{1, -2}, {-3, 2}});
    CHECK(parse_two_cnf_text(two_cnf_text(f)).clauses == f.clauses);
    CHECK_THROWS(parse_two_cnf_text("1 2 3\n"));
    CHECK_THROWS(parse_two_cnf_text("p cnf 1 1\n1 2\n"));
}

TEST_CASE("exactly-one oracle") {
    CHECK(oracle_max1in2sat(parse_two_cnf_text("1 2\n")) == 1);
    CHECK(oracle_max1in2sat(parse_two_cnf_text("1 2\n-1 -2\n")) == 2);
    CHECK(oracle_max1in2sat(parse_two_cnf_text("1 1\n")) == 0);
    CHECK(oracle_max1in2sat(parse_two_cnf_text("1 2\n1 -2\n")) == 1);
}

TEST_CASE("reduction layout") {
    auto inst = reduce_max1in2sat(parse_two_cnf_text("1 2\n"), 1);
    CHECK(inst.ell == 8);
    CHECK(inst.k_decision == 0);
    CHECK(inst.dataset.n() == 9);
    CHECK(inst.pi.order[4] == "p0001");
    CHECK(inst.pi.order[0] == "q0001");
    CHECK(inst.dataset.value(inst.dataset.index("p0001"), 0) == 1.0);
    CHECK_THROWS_AS(reduce_max1in2sat(parse_two_cnf_text("1 2\n1 2\n1 2\n1 2\n"), 1), ContractError);
    CHECK_THROWS_AS(reduce_max1in2sat(parse_two_cnf_text("1 2\n"), 2), ContractError);
}

TEST_CASE("reduction preserves the optimum") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 40; ++t) {
        std::size_t nv = 2 + t % 3, m = 1 + rng() % (nv * nv - 1);
        TwoCnf f;
        f.n_vars = nv;
        for (std::size_t c = 0; c < m; ++c) {
            auto lit = [&] { return int(1 + rng() % nv) * (rng() % 2 ? 1 : -1); };
            int a = lit(), b = lit();
            while (std::abs(b) == std::abs(a)) b = lit();
            f.clauses.emplace_back(a, b);
        }
        auto best = oracle_max1in2sat(f);
        auto inst = reduce_max1in2sat(f, best, 2);
        CHECK(oracle_reduction_min_bonuses(inst) == m - best);
        if (t % 8 == 0) {
            auto ok = solve_bnb(encode_base(inst.dataset, inst.pi, m, m - best, 2.0));
            CHECK(ok.status == SolveStatus::Feasible);
            if (m > best) {
                auto no = solve_bnb(encode_base(inst.dataset, inst.pi, m, m - best - 1, 2.0));
                CHECK(no.status == SolveStatus::Infeasible);
            }
        }
    }
}
