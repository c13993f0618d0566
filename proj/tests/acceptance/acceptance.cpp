// One line per acceptance criterion: "criterion N: PASS|FAIL (seconds) detail".
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "../unit/helpers.hpp"
#include "bonusrank/baselines.hpp"
#include "bonusrank/datagen.hpp"
#include "bonusrank/ermb.hpp"
#include "bonusrank/io.hpp"
#include "bonusrank/milp.hpp"
#include "bonusrank/sequence.hpp"
#include "bonusrank/skyline.hpp"

using namespace bonusrank;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

int run(const std::string& cmd) {
    int rc = std::system((cmd + " 2>" + (g_work / "stderr.txt").string()).c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t lis_nlogn(const std::vector<int>& a) {
    std::vector<int> tails;
    for (int v : a) {
        auto it = std::lower_bound(tails.begin(), tails.end(), v);
        if (it == tails.end())
            tails.push_back(v);
        else
            *it = v;
    }
    return tails.size();
}

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

// Export to both formats and parse back; false on any difference.
bool round_trips(const MilpModel& m) {
    for (auto f : {ModelFormat::Lp, ModelFormat::Mps})
        if (!(parse_model(export_model(m, f), f) == m)) return false;
    return true;
}

std::size_t g_models_checked = 0, g_models_failed = 0;

void record_model(const MilpModel& m) {
    ++g_models_checked;
    if (!round_trips(m)) ++g_models_failed;
}

Outcome criterion1() {
    Outcome o;
    const std::string data = testutil::data_path("admissions.csv"), rank = testutil::data_path("admissions_ranking.txt");
    auto ds = testutil::admissions();
    auto pi = testutil::admissions_pi();
    if (g_cli.empty()) return {false, "no CLI binary given"};
    for (std::string solver : {"milp-refined", "ermb"}) {
        auto out = g_work / ("c1_" + solver + ".json");
        int rc = run(g_cli + " explain --data " + data + " --ranking " + rank + " --solver " + solver +
                     " --g 1 --k 3 --out " + out.string());
        if (rc != 0) {
            o.pass = false;
            o.detail += solver + ": explain exit " + std::to_string(rc) + "; ";
            continue;
        }
        int vrc = run(g_cli + " verify --data " + data + " --ranking " + rank + " --explanation " + out.string() +
                      " >" + (g_work / "verify.txt").string());
        auto e = explanation_from_json(slurp(out));
        bool ok = vrc == 0 && verify_realization(ds, pi, e).ok && e.bonus_count() <= 3;
        o.pass = o.pass && ok;
        o.detail += solver + " bonus=" + std::to_string(e.bonus_count()) + (ok ? " verified; " : " REJECTED; ");
    }
    auto rep = verify_realization(ds, pi, testutil::admissions_certificate());
    bool cert = rep.ok && std::abs(rep.min_gap - 0.2) <= 1e-9;
    int crc = run(g_cli + " verify --data " + data + " --ranking " + rank + " --explanation " +
                  testutil::data_path("admissions_certificate.json") + " >" + (g_work / "verify.txt").string());
    cert = cert && crc == 0;
    o.pass = o.pass && cert;
    o.detail += "certificate min_gap=" + fmt("%.12g", rep.min_gap);
    return o;
}

Outcome criterion2() {
    Outcome o;
    if (g_cli.empty()) return {false, "no CLI binary given"};
    auto out = g_work / "c2_forced.csv";
    int rc = run(g_cli + " forced --data " + testutil::data_path("admissions.csv") + " --ranking " +
                 testutil::data_path("admissions_ranking.txt") + " --out " + out.string());
    std::set<std::pair<std::string, std::string>> got;
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        auto a = line.find(','), b = line.find(',', a + 1);
        if (a != std::string::npos) got.insert({line.substr(0, a), line.substr(a + 1, b - a - 1)});
    }
    std::set<std::pair<std::string, std::string>> want{{"c5", "c4"}, {"c6", "c7"}};
    o.pass = rc == 0 && got == want;
    o.detail = "forced=" + std::to_string(got.size()) + (got == want ? " {c5<-c4, c6<-c7}" : " mismatch");

    auto ds = testutil::admissions();
    auto pi = testutil::admissions_pi();
    auto m = encode_refined(ds, pi, 1, 3);
    bool base_ok = solve_bnb(m).status == SolveStatus::Feasible;
    // c5 sits at position 4 of pi
    m.add_constraint("nobonus_c5", {{m.var(delta_name(4, 1)), 1.0}}, Relation::Equal, 0.0);
    auto s = solve_bnb(m);
    MilpLimits plain;
    plain.root_heuristic = false;
    auto s2 = solve_bnb(m, plain);
    bool inf = s.status == SolveStatus::Infeasible && s2.status == SolveStatus::Infeasible;
    o.pass = o.pass && base_ok && inf;
    o.detail += std::string("; with no-bonus(c5): ") + to_string(s.status);
    return o;
}

// Best bonus count over S equally spaced directions of the open positive quadrant, with
// an insertion re-sort between neighbouring angles and LIS recomputed only on change.
std::size_t sampling_oracle_2d(const Dataset& ds, const std::vector<std::size_t>& pos, std::size_t S) {
    const std::size_t n = ds.n();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::vector<double> sc(n);
    std::size_t best = n;
    bool first = true;
    for (std::size_t s = 0; s < S; ++s) {
        double th = (double(s) + 0.5) / double(S) * std::numbers::pi / 2;
        double c = std::cos(th), sn = std::sin(th);
        for (std::size_t i = 0; i < n; ++i) sc[i] = c * ds.value(i, 0) + sn * ds.value(i, 1);
        auto before = [&](std::size_t a, std::size_t b) {
            if (sc[a] != sc[b]) return sc[a] > sc[b];
            return pos[a] < pos[b];
        };
        bool changed = first;
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t x = order[i], j = i;
            while (j > 0 && before(x, order[j - 1])) {
                order[j] = order[j - 1];
                --j;
                changed = true;
            }
            order[j] = x;
        }
        first = false;
        if (!changed) continue;
        std::vector<int> rel(n);
        for (std::size_t i = 0; i < n; ++i) rel[i] = int(pos[order[i]]);
        best = std::min(best, n - lis_nlogn(rel));
    }
    return best;
}

struct C3Instance {
    PlantedInstance inst;
    std::size_t ermb = 0;
};
std::vector<C3Instance> g_c3;

Outcome criterion3() {
    Outcome o;
    std::size_t mismatches = 0, over = 0, bad = 0, thin = 0;
    double t_ermb = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = gen_synthetic(200, 2, 1, 20, Distribution::Uniform, seed);
        double t0 = now();
        auto r = explain_singleton(inst.dataset, inst.pi, 20);
        t_ermb += now() - t0;
        thin += r.stats.thin_skipped;
        if (r.status != SolveStatus::Feasible || !r.explanation) {
            ++over;
            continue;
        }
        if (!verify_realization(inst.dataset, inst.pi, *r.explanation).ok) ++bad;
        std::size_t got = r.explanation->bonus_count();
        if (got > 20) ++over;
        auto pos = positions_of(ranking_indices(inst.dataset, inst.pi));
        std::size_t oracle = sampling_oracle_2d(inst.dataset, pos, 100000);
        if (oracle != got) ++mismatches;
        g_c3.push_back({std::move(inst), got});
    }
    o.pass = mismatches == 0 && over == 0 && bad == 0;
    o.detail = "50 instances, oracle mismatches=" + std::to_string(mismatches) + ", over budget=" +
               std::to_string(over) + ", unverified=" + std::to_string(bad) + ", thin cells=" + std::to_string(thin) +
               ", ermb " + fmt("%.2fs", t_ermb);
    return o;
}

// Max matched length over every kept subset of pi and every labeling of it.
std::size_t mg_exhaustive(const Ranking& pi, const std::vector<std::pair<std::string, int>>& rho, std::size_t g,
                          std::size_t k) {
    const std::size_t n = pi.size();
    std::size_t best = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<std::string> seq;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) seq.push_back(pi.order[i]);
        if (seq.size() <= best) continue;
        std::size_t combos = 1;
        for (std::size_t i = 0; i < seq.size(); ++i) combos *= g + 1;
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<int> lab(seq.size());
            std::size_t x = c, used = 0;
            for (auto& l : lab) {
                l = int(x % (g + 1));
                x /= g + 1;
                used += l > 0;
            }
            if (used > k) continue;
            std::size_t at = 0;
            for (auto& p : rho)
                if (at < seq.size() && p.first == seq[at] && p.second == lab[at]) ++at;
            if (at == seq.size()) {
                best = seq.size();
                break;
            }
        }
    }
    return best;
}

Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::size_t lis_bad = 0, lcs_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<int> p(1 + rng() % 50);
        std::iota(p.begin(), p.end(), 1);
        std::shuffle(p.begin(), p.end(), rng);
        if (lis(p).length != lis_quadratic(p)) ++lis_bad;
    }
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng() % 7, g = 1 + rng() % 2, k = rng() % (n + 1);
        Ranking pi;
        for (std::size_t i = 0; i < n; ++i) pi.order.push_back("t" + std::to_string(i));
        std::shuffle(pi.order.begin(), pi.order.end(), rng);
        std::vector<std::pair<std::string, int>> rho;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l <= g; ++l) rho.emplace_back("t" + std::to_string(i), int(l));
        std::shuffle(rho.begin(), rho.end(), rng);
        auto r = budgeted_multigroup_lcs(pi, rho, g, k);
        if (r.length != mg_exhaustive(pi, rho, g, k) || r.budget_used > k || r.kept.size() != r.length) ++lcs_bad;
    }
    o.pass = lis_bad == 0 && lcs_bad == 0;
    o.detail = "LIS mismatches=" + std::to_string(lis_bad) + "/1000, LCS mismatches=" + std::to_string(lcs_bad) + "/200";
    return o;
}

Ranking perturbed(std::mt19937_64& rng, const Dataset& ds, int swaps) {
    std::uniform_real_distribution<double> U(0.1, 1.0);
    std::vector<double> w(ds.d());
    for (auto& x : w) x = U(rng);
    auto pi = ranking_from_weights(ds, w);
    for (int s = 0; s < swaps; ++s) {
        std::size_t p = rng() % (pi.size() - 1);
        std::swap(pi.order[p], pi.order[p + 1]);
    }
    return pi;
}

Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::size_t disagree = 0, limits = 0, feasible = 0;
    const double eps = 1e-3, vmax = 10.0;
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 4 + rng() % 9, d = 2 + rng() % 2, k = rng() % 5;
        auto ds = testutil::random_dataset(rng, n, d, t % 3 == 0 ? 8 : 0);
        auto pi = t % 5 == 0 ? testutil::random_ranking(rng, ds) : perturbed(rng, ds, 1 + int(rng() % 4));
        auto m = encode_refined(ds, pi, 1, k, eps, vmax);
        record_model(m);
        MilpLimits lim;
        lim.root_heuristic = t % 2 == 0;
        auto sol = solve_bnb(m, lim);
        if (sol.status == SolveStatus::Limit) ++limits;

        // every 0/1 vector over the n group indicators, one LP each
        auto order = ranking_indices(ds, pi);
        bool any = false;
        for (std::size_t mask = 0; mask < (std::size_t(1) << n) && !any; ++mask) {
            if (std::size_t(__builtin_popcountll(mask)) > k) continue;
            std::vector<char> boosted(n);
            for (std::size_t i = 0; i < n; ++i) boosted[order[i]] = (mask >> i) & 1;
            testutil::GroupLp g;
            g.margin = eps;
            g.v_hi = vmax;
            any = testutil::group_feasible(ds, order, boosted, g);
        }
        feasible += any;
        bool got = sol.status == SolveStatus::Feasible;
        if (got) got = verify_realization(ds, pi, decode(m, sol, ds)).ok;
        if (got != any || sol.status == SolveStatus::Limit) ++disagree;
    }
    o.pass = disagree == 0;
    o.detail = "100 encodings (" + std::to_string(feasible) + " feasible), disagreements=" + std::to_string(disagree) +
               ", limits=" + std::to_string(limits);
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::size_t ok = 0;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = gen_synthetic(500, 5, 1, 50, Distribution::Uniform, seed);
        double t0 = now();
        std::set<std::string> forced;
        for (const auto& rec : forced_bonus_tuples(inst.dataset, inst.pi)) forced.insert(rec.forced_id);
        auto m = encode_refined(inst.dataset, inst.pi, 1, 50, kDefaultEpsilon, kDefaultVmax, forced);
        MilpLimits lim;
        lim.time_limit = 600;
        auto sol = solve_bnb(m, lim);
        double dt = now() - t0;
        worst = std::max(worst, dt);
        record_model(m);
        bool good = false;
        if (sol.status == SolveStatus::Feasible) {
            auto e = decode(m, sol, inst.dataset);
            auto rep = verify_realization(inst.dataset, inst.pi, e);
            good = rep.ok && rep.min_gap >= kDefaultEpsilon - 1e-9 && e.bonus_count() <= 50 && dt < 600;
        }
        ok += good;
        if (!good) o.detail += "seed " + std::to_string(seed) + ": " + to_string(sol.status) + "; ";
    }
    o.pass = ok == 10;
    o.detail += std::to_string(ok) + "/10 feasible and verified, slowest " + fmt("%.2fs", worst);
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::size_t oracle_bad = 0, milp_bad = 0, nodes = 0;
    for (int t = 0; t < 50; ++t) {
        TwoCnf f;
        f.n_vars = 2 + rng() % 2;
        std::size_t m = 1 + rng() % std::min<std::size_t>(4, f.n_vars * f.n_vars - 1);
        for (std::size_t c = 0; c < m; ++c) {
            int a = int(1 + rng() % f.n_vars), b = int(1 + rng() % f.n_vars);
            while (b == a) b = int(1 + rng() % f.n_vars);
            f.clauses.emplace_back(a, b);
        }
        std::size_t rstar = oracle_max1in2sat(f);
        for (std::size_t r = 0; r <= m; ++r) {
            auto inst = reduce_max1in2sat(f, r);
            if (r == 0 && oracle_reduction_min_bonuses(inst) != m - rstar) ++oracle_bad;
            auto model = encode_base(inst.dataset, inst.pi, m, m - r, 2.0);
            auto sol = solve_bnb(model);
            nodes = std::max(nodes, sol.node_count);
            bool feas = sol.status == SolveStatus::Feasible;
            if (sol.status == SolveStatus::Limit || feas != (r <= rstar)) ++milp_bad;
            if (feas && !verify_realization(inst.dataset, inst.pi, decode(model, sol, inst.dataset)).ok) ++milp_bad;
        }
    }
    o.pass = oracle_bad == 0 && milp_bad == 0;
    o.detail = "50 formulas, oracle mismatches=" + std::to_string(oracle_bad) +
               ", MILP decision mismatches=" + std::to_string(milp_bad) + ", max nodes=" + std::to_string(nodes);
    return o;
}

Outcome criterion8() {
    Outcome o;
    double recall_sum = 0;
    std::size_t fp = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto inst = gen_synthetic(10000, 2, 1, 1000, Distribution::Uniform, seed);
        std::set<std::string> planted(inst.true_bonuses[0].members.begin(), inst.true_bonuses[0].members.end());
        std::size_t hit = 0;
        for (const auto& rec : forced_bonus_tuples(inst.dataset, inst.pi)) {
            if (planted.count(rec.forced_id))
                ++hit;
            else
                ++fp;
        }
        recall_sum += double(hit) / double(planted.size());
    }
    double recall = recall_sum / 5;
    o.pass = recall >= 0.85 && fp == 0;
    o.detail = "mean recall=" + fmt("%.4f", recall) + ", false positives=" + std::to_string(fp);
    return o;
}

Outcome criterion9() {
    Outcome o;
    if (g_c3.empty()) return {false, "criterion 3 produced no instances"};
    std::size_t below = 0, strict = 0;
    for (std::size_t i = 0; i < g_c3.size(); ++i) {
        const auto& c = g_c3[i];
        auto s = sampling_baseline(c.inst.dataset, c.inst.pi, {10000, 0.0}, 1000 + i);
        auto w = pairwise_logistic(c.inst.dataset, c.inst.pi, 200, 0.1, Quadrant::Positive);
        std::size_t lg = bonus_count_for(c.inst.dataset, c.inst.pi, w);
        if (s.bonus_count < c.ermb || lg < c.ermb) ++below;
        if (s.bonus_count > c.ermb || lg > c.ermb) ++strict;
    }
    o.pass = below == 0 && strict >= 1;
    o.detail = std::to_string(g_c3.size()) + " instances, baseline below optimum=" + std::to_string(below) +
               ", strictly worse on " + std::to_string(strict);
    return o;
}

Outcome criterion10() {
    Outcome o;
    o.pass = g_models_checked > 0 && g_models_failed == 0;
    o.detail = std::to_string(g_models_checked) + " models x {LP, MPS}, failures=" + std::to_string(g_models_failed);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        std::string a = argv[i];
        if (a == "--cli") g_cli = argv[++i];
        else if (a == "--workdir") g_work = argv[++i];
    }
    if (g_work.empty()) g_work = fs::temp_directory_path() / "bonusrank_acceptance";
    fs::create_directories(g_work);

    std::vector<std::function<Outcome()>> crit{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                criterion6, criterion7, criterion8, criterion9, criterion10};
    std::size_t failed = 0;
    for (std::size_t c = 0; c < crit.size(); ++c) {
        double t0 = now();
        Outcome r;
        try {
            r = crit[c]();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failed += !r.pass;
        std::cout << "criterion " << c + 1 << ": " << (r.pass ? "PASS" : "FAIL") << " (" << fmt("%.2f", now() - t0)
                  << "s) " << r.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failed ? 1 : 0;
}
