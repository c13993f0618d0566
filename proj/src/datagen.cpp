#include "bonusrank/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

namespace bonusrank {

const char* to_string(Distribution d) { return d == Distribution::Uniform ? "uniform" : "zipf"; }

Distribution parse_distribution(const std::string& s) {
    if (s == "uniform") return Distribution::Uniform;
    if (s == "zipf" || s == "zeta") return Distribution::Zipf;
    throw InputError("unknown distribution '" + s + "' (expected uniform or zipf)");
}

Explanation PlantedInstance::explanation() const {
    Explanation e;
    e.weights = true_weights;
    for (const auto& g : true_bonuses)
        if (!g.members.empty()) e.groups.push_back(g);
    e.regime = Regime::non_strict();
    e.provenance = {"planted", {{"seed", std::to_string(params.seed)}, {"dist", to_string(params.dist)}}};
    return e;
}

namespace {

constexpr double kZipfCap = 1e4;

// Zeta(2) by rejection from the continuous Pareto envelope (Devroye, ch. X.6).
double zeta2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double b = 2.0;  // 2^(s-1), s = 2
    while (true) {
        double u = U(rng), v = U(rng);
        if (u <= 0.0) continue;
        double x = std::floor(1.0 / u);  // u^(-1/(s-1))
        double t = 1.0 + 1.0 / x;        // (1 + 1/x)^(s-1)
        if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return std::min(x, kZipfCap);
    }
}

std::string padded(const std::string& prefix, std::size_t i, std::size_t total) {
    std::string s = std::to_string(i);
    std::size_t width = std::max<std::size_t>(4, std::to_string(total).size());
    return prefix + std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

}  // namespace

PlantedInstance gen_synthetic(const GenParams& P) {
    if (P.n < 1 || P.d < 1) throw ContractError("gen_synthetic: n and d must be >= 1");
    if (P.g < 1) throw ContractError("gen_synthetic: g must be >= 1");
    if (P.k > P.n) throw ContractError("gen_synthetic: k must not exceed n");
    std::mt19937_64 rng(P.seed);
    std::uniform_real_distribution<double> U25(0.0, 25.0);
    auto draw = [&] { return P.dist == Distribution::Uniform ? U25(rng) : zeta2(rng); };

    const std::size_t n = P.n, d = P.d;
    std::vector<double> vals(n * d);
    for (auto& x : vals) x = std::round(draw() * 100.0) / 100.0;
    std::vector<double> w(d);
    for (auto& x : w) x = draw();

    // bonus tuples: k drawn from a random subset of size min(n, 2k), dealt round-robin to groups
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(n, 2 * P.k));
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(P.k);
    std::uniform_real_distribution<double> Ub(5.0 * double(d), 10.0 * double(d));
    std::vector<double> bonus(P.g);
    for (auto& b : bonus) b = Ub(rng);
    std::vector<int> group_of(n, -1);
    for (std::size_t q = 0; q < idx.size(); ++q) group_of[idx[q]] = static_cast<int>(q % P.g);

    std::vector<std::string> ids(n), labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = padded("t", i + 1, n);
        labels[i] = group_of[i] < 0 ? "none" : "G" + std::to_string(group_of[i] + 1);
    }
    PlantedInstance inst;
    inst.params = P;
    inst.true_weights = w;
    inst.true_bonuses.resize(P.g);
    for (std::size_t r = 0; r < P.g; ++r) inst.true_bonuses[r].bonus = bonus[r];
    for (std::size_t i = 0; i < n; ++i)
        if (group_of[i] >= 0) inst.true_bonuses[static_cast<std::size_t>(group_of[i])].members.push_back(ids[i]);
    inst.dataset = Dataset(std::move(ids), std::move(vals), d, {}, std::move(labels));

    std::vector<double> s = scores(inst.dataset, w);
    for (std::size_t i = 0; i < n; ++i)
        if (group_of[i] >= 0) s[i] += bonus[static_cast<std::size_t>(group_of[i])];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s[a] != s[b]) return s[a] > s[b];
        return inst.dataset.id(a) < inst.dataset.id(b);
    });
    for (auto i : order) inst.pi.order.push_back(inst.dataset.id(i));
    return inst;
}

PlantedInstance gen_synthetic(std::size_t n, std::size_t d, std::size_t g, std::size_t k, Distribution dist,
                              std::uint64_t seed) {
    return gen_synthetic(GenParams{n, d, g, k, dist, seed});
}

void TwoCnf::validate() const {
    for (auto [a, b] : clauses) {
        if (a == 0 || b == 0) throw ContractError("2-CNF literal 0 is not allowed");
        if (static_cast<std::size_t>(std::abs(a)) > n_vars || static_cast<std::size_t>(std::abs(b)) > n_vars)
            throw ContractError("2-CNF literal exceeds the variable count");
    }
}

TwoCnf parse_two_cnf(std::istream& in) {
    TwoCnf f;
    std::string line;
    std::size_t lineno = 0, declared = 0;
    bool have_header = false;
    std::size_t maxvar = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '#') continue;
        if (first == "p") {
            std::string fmt;
            if (!(ls >> fmt >> declared) || (fmt != "cnf" && fmt != "2cnf"))
                throw InputError("2-CNF line " + std::to_string(lineno) + ": bad header");
            have_header = true;
            continue;
        }
        std::vector<long> lits;
        std::istringstream all(line);
        std::string tok;
        while (all >> tok) {
            try {
                std::size_t used = 0;
                long v = std::stol(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                lits.push_back(v);
            } catch (const std::exception&) {
                throw InputError("2-CNF line " + std::to_string(lineno) + ": not an integer: " + tok);
            }
        }
        if (lits.size() == 3 && lits[2] == 0) lits.pop_back();
        if (lits.size() != 2 || lits[0] == 0 || lits[1] == 0)
            throw InputError("2-CNF line " + std::to_string(lineno) + ": expected two nonzero literals");
        if (std::abs(lits[0]) > 1'000'000 || std::abs(lits[1]) > 1'000'000)
            throw InputError("2-CNF line " + std::to_string(lineno) + ": literal out of range");
        f.clauses.emplace_back(static_cast<int>(lits[0]), static_cast<int>(lits[1]));
        maxvar = std::max<std::size_t>({maxvar, static_cast<std::size_t>(std::abs(lits[0])),
                                        static_cast<std::size_t>(std::abs(lits[1]))});
    }
    if (have_header && declared < maxvar) throw InputError("2-CNF: literal exceeds the declared variable count");
    f.n_vars = have_header ? declared : maxvar;
    return f;
}

TwoCnf parse_two_cnf_text(const std::string& text) {
    std::istringstream in(text);
    return parse_two_cnf(in);
}

std::string two_cnf_text(const TwoCnf& f) {
    std::ostringstream o;
    o << "p cnf " << f.n_vars << ' ' << f.m() << '\n';
    for (auto [a, b] : f.clauses) o << a << ' ' << b << " 0\n";
    return o.str();
}

ReductionInstance reduce_max1in2sat(const TwoCnf& F, std::size_t r, std::size_t block_size) {
    F.validate();
    if (F.n_vars < 1) throw ContractError("reduce_max1in2sat: need at least one variable");
    const std::size_t m = F.m(), nv = F.n_vars;
    if (m >= nv * nv) throw ContractError("reduce_max1in2sat: requires m < n_vars^2");
    if (r > m) throw ContractError("reduce_max1in2sat: r must be in [0, m]");
    const std::size_t block = block_size ? block_size : nv * nv;
    const std::size_t ell = (m + 1) * block;

    ReductionInstance inst;
    inst.formula = F;
    inst.r = r;
    inst.ell = ell;
    inst.k_decision = static_cast<long>(m) - static_cast<long>(r);

    std::vector<std::string> ids;
    std::vector<double> vals;
    for (std::size_t c = 0; c < m; ++c) {
        ids.push_back(padded("p", c + 1, m));
        std::vector<double> p(nv, 0.0);
        for (int lit : {F.clauses[c].first, F.clauses[c].second})
            p[static_cast<std::size_t>(std::abs(lit)) - 1] += lit > 0 ? 1.0 : -1.0;
        vals.insert(vals.end(), p.begin(), p.end());
        inst.clause_point_ids.push_back(ids.back());
    }
    for (std::size_t q = 0; q < ell; ++q) {
        ids.push_back(padded("q", q + 1, ell));
        vals.insert(vals.end(), nv, 0.0);
    }
    // q_1..q_B, p_1, q_{B+1}..q_{2B}, p_2, ..., p_m, last block
    for (std::size_t blk = 0; blk <= m; ++blk) {
        for (std::size_t q = 0; q < block; ++q) inst.pi.order.push_back(ids[m + blk * block + q]);
        if (blk < m) inst.pi.order.push_back(ids[blk]);
    }
    std::vector<std::string> names;
    for (std::size_t j = 1; j <= nv; ++j) names.push_back("x" + std::to_string(j));
    inst.dataset = Dataset(std::move(ids), std::move(vals), nv, std::move(names));
    return inst;
}

std::size_t oracle_max1in2sat(const TwoCnf& F) {
    F.validate();
    if (F.n_vars > 20) throw RefusalError("oracle_max1in2sat: more than 20 variables");
    std::size_t best = 0;
    for (std::uint32_t a = 0; a < (1u << F.n_vars); ++a) {
        auto val = [&](int lit) {
            bool x = (a >> (std::abs(lit) - 1)) & 1u;
            return lit > 0 ? x : !x;
        };
        std::size_t c = 0;
        for (auto [p, q] : F.clauses) c += (val(p) != val(q));
        best = std::max(best, c);
    }
    return best;
}

std::size_t oracle_reduction_min_bonuses(const ReductionInstance& inst) {
    const std::size_t nv = inst.dataset.d();
    if (nv > 20) throw RefusalError("oracle_reduction_min_bonuses: more than 20 dimensions");
    std::vector<std::size_t> rows;
    for (const auto& id : inst.clause_point_ids) rows.push_back(inst.dataset.index(id));
    std::size_t best = rows.size();
    std::vector<double> w(nv);
    for (std::uint32_t a = 0; a < (1u << nv); ++a) {
        for (std::size_t j = 0; j < nv; ++j) w[j] = (a >> j) & 1u ? 1.0 : -1.0;
        std::size_t c = 0;
        for (auto i : rows) c += linear_score(w, inst.dataset.row(i)) != 0.0;
        best = std::min(best, c);
    }
    return best;
}

}  // namespace bonusrank
