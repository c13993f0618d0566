#include "bonusrank/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bonusrank/io.hpp"

namespace bonusrank {

std::size_t MilpModel::add_var(std::string name, double lo, double hi, bool integer) {
    if (name.empty()) throw ContractError("MILP variable needs a name");
    if (var_index_.count(name)) throw ContractError("duplicate MILP variable " + name);
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw ContractError("bad bounds for " + name);
    var_index_[name] = vars.size();
    vars.push_back({std::move(name), lo, hi, integer});
    return vars.size() - 1;
}

std::size_t MilpModel::add_constraint(std::string name, std::vector<std::pair<std::size_t, double>> terms,
                                      Relation rel, double rhs) {
    if (name.empty()) throw ContractError("MILP constraint needs a name");
    if (con_index_.count(name)) throw ContractError("duplicate MILP constraint " + name);
    if (!std::isfinite(rhs)) throw ContractError("constraint " + name + ": rhs not finite");
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<std::size_t, double>> merged;
    for (auto [j, a] : terms) {
        if (j >= vars.size()) throw ContractError("constraint " + name + " references an undeclared variable");
        if (!std::isfinite(a)) throw ContractError("constraint " + name + ": coefficient not finite");
        if (!merged.empty() && merged.back().first == j)
            merged.back().second += a;
        else
            merged.emplace_back(j, a);
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
    con_index_[name] = cons.size();
    cons.push_back({std::move(name), std::move(merged), rel, rhs});
    return cons.size() - 1;
}

std::optional<std::size_t> MilpModel::find_var(const std::string& name) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t MilpModel::var(const std::string& name) const {
    auto j = find_var(name);
    if (!j) throw ContractError("model has no variable " + name);
    return *j;
}

std::optional<std::size_t> MilpModel::find_constraint(const std::string& name) const {
    auto it = con_index_.find(name);
    if (it == con_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t MilpModel::num_integer() const {
    return static_cast<std::size_t>(std::count_if(vars.begin(), vars.end(), [](const MilpVar& v) { return v.integer; }));
}

double MilpModel::violation(const std::vector<double>& x) const {
    if (x.size() != vars.size()) throw ContractError("assignment size != variable count");
    double worst = 0.0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        worst = std::max({worst, vars[j].lo - x[j], x[j] - vars[j].hi});
        if (vars[j].integer) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
    }
    for (const auto& c : cons) {
        double act = 0.0;
        for (auto [j, a] : c.terms) act += a * x[j];
        switch (c.rel) {
            case Relation::LessEq: worst = std::max(worst, act - c.rhs); break;
            case Relation::GreaterEq: worst = std::max(worst, c.rhs - act); break;
            case Relation::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
        }
    }
    return worst;
}

std::string w_name(std::size_t j) { return "w_" + std::to_string(j); }
std::string v_name(std::size_t r) { return "v_" + std::to_string(r); }
std::string delta_name(std::size_t i, std::size_t r) { return "d_" + std::to_string(i) + "_" + std::to_string(r); }
std::string z_name(std::size_t i, std::size_t r) { return "z_" + std::to_string(i) + "_" + std::to_string(r); }
std::string sign_name(std::size_t j) { return "s_" + std::to_string(j); }

namespace {

struct Layout {
    std::vector<std::size_t> w, v;
    std::vector<std::vector<std::size_t>> delta, z;  // [position][group]
};

// Shared skeleton of both encodings: variables, ordering rows with rhs `gap`,
// uniqueness, budget and the big-M linearization.
Layout skeleton(MilpModel& m, const Dataset& ds, const std::vector<std::size_t>& order, std::size_t g,
                std::size_t k, double big_m, double w_lo, double w_hi, double gap) {
    const std::size_t n = order.size(), d = ds.d();
    Layout L;
    for (std::size_t j = 1; j <= d; ++j) L.w.push_back(m.add_var(w_name(j), w_lo, w_hi));
    for (std::size_t r = 1; r <= g; ++r) L.v.push_back(m.add_var(v_name(r), 0.0, big_m));
    L.delta.assign(n, {});
    L.z.assign(n, {});
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t r = 1; r <= g; ++r) L.delta[i - 1].push_back(m.add_var(delta_name(i, r), 0.0, 1.0, true));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t r = 1; r <= g; ++r) L.z[i - 1].push_back(m.add_var(z_name(i, r), 0.0, kInf));

    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::vector<std::pair<std::size_t, double>> t;
        auto a = ds.row(order[i]), b = ds.row(order[i + 1]);
        for (std::size_t j = 0; j < d; ++j) t.emplace_back(L.w[j], a[j] - b[j]);
        for (std::size_t r = 0; r < g; ++r) {
            t.emplace_back(L.z[i][r], 1.0);
            t.emplace_back(L.z[i + 1][r], -1.0);
        }
        m.add_constraint("ord_" + std::to_string(i + 1), std::move(t), Relation::GreaterEq, gap);
    }
    if (g > 0) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<std::size_t, double>> t;
            for (std::size_t r = 0; r < g; ++r) t.emplace_back(L.delta[i][r], 1.0);
            m.add_constraint("uniq_" + std::to_string(i + 1), std::move(t), Relation::LessEq, 1.0);
        }
        std::vector<std::pair<std::size_t, double>> t;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t r = 0; r < g; ++r) t.emplace_back(L.delta[i][r], 1.0);
        m.add_constraint("budget", std::move(t), Relation::LessEq, static_cast<double>(k));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < g; ++r) {
            std::string tag = std::to_string(i + 1) + "_" + std::to_string(r + 1);
            auto zz = L.z[i][r], dd = L.delta[i][r], vv = L.v[r];
            m.add_constraint("lin1_" + tag, {{zz, 1.0}, {dd, -big_m}}, Relation::LessEq, 0.0);
            m.add_constraint("lin2_" + tag, {{zz, 1.0}, {vv, -1.0}}, Relation::LessEq, 0.0);
            m.add_constraint("lin3_" + tag, {{zz, 1.0}, {vv, -1.0}, {dd, -big_m}}, Relation::GreaterEq, -big_m);
        }
    return L;
}

void fill_meta(MilpModel& m, const std::string& enc, const Dataset& ds, const Ranking& pi, std::size_t g,
               std::size_t k) {
    m.meta.encoding = enc;
    m.meta.n = ds.n();
    m.meta.d = ds.d();
    m.meta.g = g;
    m.meta.k = k;
    m.meta.pi = pi.order;
}

}  // namespace

MilpModel encode_base(const Dataset& ds, const Ranking& pi, std::size_t g, std::size_t k, double big_m,
                      double weight_box) {
    auto order = ranking_indices(ds, pi);
    if (!(big_m > 0.0) || !std::isfinite(big_m)) throw ContractError("encode_base: M must be positive and finite");
    if (!(weight_box >= 1.0) || !std::isfinite(weight_box)) throw ContractError("encode_base: weight box must be >= 1");
    MilpModel m;
    fill_meta(m, "base", ds, pi, g, k);
    m.meta.big_m = big_m;
    m.meta.weight_box = weight_box;
    Layout L = skeleton(m, ds, order, g, k, big_m, -weight_box, weight_box, 0.0);
    // |w_j| >= 1: s_j = 1 selects w_j >= 1, s_j = 0 selects w_j <= -1
    for (std::size_t j = 0; j < ds.d(); ++j) {
        auto s = m.add_var(sign_name(j + 1), 0.0, 1.0, true);
        m.add_constraint("sgn_lo_" + std::to_string(j + 1), {{L.w[j], 1.0}, {s, -weight_box}}, Relation::GreaterEq,
                         1.0 - weight_box);
        m.add_constraint("sgn_hi_" + std::to_string(j + 1), {{L.w[j], 1.0}, {s, -weight_box}}, Relation::LessEq, -1.0);
    }
    return m;
}

MilpModel encode_refined(const Dataset& ds, const Ranking& pi, std::size_t g, std::size_t k, double epsilon,
                         double v_max, const std::set<std::string>& forced) {
    auto order = ranking_indices(ds, pi);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ContractError("encode_refined: epsilon must be positive");
    if (!(v_max > 0.0) || !std::isfinite(v_max)) throw ContractError("encode_refined: v_max must be positive");
    for (const auto& id : forced)
        if (!ds.find(id)) throw ContractError("encode_refined: forced id " + id + " is not in the dataset");
    MilpModel m;
    fill_meta(m, "refined", ds, pi, g, k);
    m.meta.epsilon = epsilon;
    m.meta.big_m = v_max;
    Layout L = skeleton(m, ds, order, g, k, v_max, 0.0, kInf, epsilon);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!forced.count(ds.id(order[i]))) continue;
        std::vector<std::pair<std::size_t, double>> t;
        for (std::size_t r = 0; r < g; ++r) t.emplace_back(L.delta[i][r], 1.0);
        m.add_constraint("force_" + std::to_string(i + 1), std::move(t), Relation::Equal, 1.0);
    }
    return m;
}

SparseLinearProgram relaxation(const MilpModel& m, const std::vector<double>* lo, const std::vector<double>* hi) {
    SparseLinearProgram lp(m.vars.size());
    lp.sense = m.sense;
    for (auto [j, a] : m.objective) lp.objective[j] += a;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        lp.lower[j] = lo ? (*lo)[j] : m.vars[j].lo;
        lp.upper[j] = hi ? (*hi)[j] : m.vars[j].hi;
    }
    lp.rows.reserve(m.cons.size());
    for (const auto& c : m.cons) lp.rows.push_back({c.terms, c.rel, c.rhs});
    return lp;
}

namespace {

// Ordering rows carry the margin the decoded explanation is verified against;
// solving with a sliver of slack keeps LP round-off from eating into it.
constexpr double kOrderSlack = 1e-8;

std::optional<std::vector<double>> fixed_lp(const MilpModel& m, const std::vector<double>& fixed, double slack) {
    std::vector<double> lo(m.vars.size()), hi(m.vars.size());
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        lo[j] = m.vars[j].lo;
        hi[j] = m.vars[j].hi;
        if (m.vars[j].integer) lo[j] = hi[j] = std::round(fixed[j]);
    }
    auto lp = relaxation(m, &lo, &hi);
    if (slack > 0.0)
        for (std::size_t c = 0; c < m.cons.size(); ++c)
            if (m.cons[c].name.rfind("ord_", 0) == 0 && m.cons[c].rel == Relation::GreaterEq) lp.rows[c].rhs += slack;
    auto r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return std::nullopt;
    for (std::size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].integer) r.x[j] = std::round(fixed[j]);
    if (m.violation(r.x) > kMilpTol) return std::nullopt;
    return r.x;
}

}  // namespace

std::optional<std::vector<double>> solve_fixed(const MilpModel& m, const std::vector<double>& fixed) {
    if (fixed.size() != m.vars.size()) throw ContractError("solve_fixed: assignment size != variable count");
    if (auto x = fixed_lp(m, fixed, kOrderSlack)) return x;
    return fixed_lp(m, fixed, 0.0);
}

MilpSolution solve_bnb(const MilpModel& m, const MilpLimits& limits) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };
    MilpSolution sol;

    if (limits.root_heuristic && m.meta.encoding == "refined" && m.meta.g >= 1) {
        if (auto x = refined_heuristic(m, limits.time_limit)) {
            sol.status = SolveStatus::Feasible;
            sol.values = std::move(*x);
            sol.from_heuristic = true;
            sol.wall_time = elapsed();
            return sol;
        }
    }

    std::vector<std::size_t> ints;
    for (std::size_t j = 0; j < m.vars.size(); ++j)
        if (m.vars[j].integer) ints.push_back(j);

    struct Node {
        std::vector<double> lo, hi;  // integer variables only, parallel to ints
    };
    std::vector<Node> stack;
    {
        Node root;
        for (auto j : ints) {
            root.lo.push_back(std::ceil(m.vars[j].lo - kMilpTol));
            root.hi.push_back(std::floor(m.vars[j].hi + kMilpTol));
        }
        stack.push_back(std::move(root));
    }
    bool uncertain = false;  // some subtree was dropped without proof
    std::vector<double> lo(m.vars.size()), hi(m.vars.size());
    while (!stack.empty()) {
        if ((limits.node_limit && sol.node_count >= limits.node_limit) ||
            (limits.time_limit > 0.0 && elapsed() >= limits.time_limit)) {
            sol.status = SolveStatus::Limit;
            sol.open_nodes = stack.size();
            sol.wall_time = elapsed();
            return sol;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        ++sol.node_count;
        bool empty_box = false;
        for (std::size_t j = 0; j < m.vars.size(); ++j) {
            lo[j] = m.vars[j].lo;
            hi[j] = m.vars[j].hi;
        }
        for (std::size_t q = 0; q < ints.size(); ++q) {
            lo[ints[q]] = node.lo[q];
            hi[ints[q]] = node.hi[q];
            if (node.lo[q] > node.hi[q]) empty_box = true;
        }
        if (empty_box) continue;
        auto r = solve_lp(relaxation(m, &lo, &hi));
        if (r.status == LpStatus::Infeasible) continue;
        if (r.status != LpStatus::Optimal) {
            uncertain = true;
            continue;
        }
        std::size_t pick = ints.size();
        double best_frac = kMilpTol;
        for (std::size_t q = 0; q < ints.size(); ++q) {
            double x = r.x[ints[q]];
            double f = std::abs(x - std::round(x));
            if (f > best_frac) {
                best_frac = f;
                pick = q;
            }
        }
        if (pick == ints.size()) {
            if (auto x = solve_fixed(m, r.x)) {
                sol.status = SolveStatus::Feasible;
                sol.values = std::move(*x);
                sol.wall_time = elapsed();
                return sol;
            }
            // near-integral binaries times big-M can still fake the ordering margin; branch on them
            best_frac = 1e-12;
            for (std::size_t q = 0; q < ints.size(); ++q) {
                double f = std::abs(r.x[ints[q]] - std::round(r.x[ints[q]]));
                if (f > best_frac) {
                    best_frac = f;
                    pick = q;
                }
            }
            if (pick == ints.size()) {
                uncertain = true;
                continue;
            }
        }
        double x = r.x[ints[pick]];
        Node down = node, up = std::move(node);
        down.hi[pick] = std::floor(x);
        up.lo[pick] = std::ceil(x);
        // nearer child is explored first
        if (x - std::floor(x) < 0.5) {
            stack.push_back(std::move(up));
            stack.push_back(std::move(down));
        } else {
            stack.push_back(std::move(down));
            stack.push_back(std::move(up));
        }
    }
    sol.status = uncertain ? SolveStatus::Limit : SolveStatus::Infeasible;
    sol.wall_time = elapsed();
    return sol;
}

Explanation decode(const MilpModel& m, const MilpSolution& sol, const Dataset& ds) {
    if (sol.status != SolveStatus::Feasible) throw ContractError("decode: solution is not feasible");
    if (sol.values.size() != m.vars.size()) throw ContractError("decode: assignment size != variable count");
    const auto& md = m.meta;
    if (md.pi.size() != md.n) throw ContractError("decode: model carries no ranking");
    Ranking pi{md.pi};
    ranking_indices(ds, pi);

    Explanation e;
    for (std::size_t j = 1; j <= md.d; ++j) e.weights.push_back(sol.value(m, w_name(j)));
    std::vector<Group> groups(md.g);
    for (std::size_t r = 1; r <= md.g; ++r) groups[r - 1].bonus = sol.value(m, v_name(r));
    for (std::size_t i = 1; i <= md.n; ++i) {
        std::size_t hits = 0;
        for (std::size_t r = 1; r <= md.g; ++r)
            if (std::round(sol.value(m, delta_name(i, r))) == 1.0) {
                groups[r - 1].members.push_back(md.pi[i - 1]);
                ++hits;
            }
        if (hits > 1) throw InvariantError("decode: tuple " + md.pi[i - 1] + " assigned to " + std::to_string(hits) + " groups");
    }
    for (auto& gr : groups)
        if (!gr.members.empty()) e.groups.push_back(std::move(gr));
    e.regime = md.encoding == "refined" ? Regime::strict_eps(md.epsilon) : Regime::non_strict();
    e.provenance.solver = md.encoding.empty() ? "milp" : "milp-" + md.encoding;
    e.provenance.params = {{"g", std::to_string(md.g)},
                           {"k", std::to_string(md.k)},
                           {"nodes", std::to_string(sol.node_count)},
                           {"heuristic", sol.from_heuristic ? "yes" : "no"}};
    if (md.encoding == "refined") {
        e.provenance.params.emplace_back("epsilon", format_double(md.epsilon));
        e.provenance.params.emplace_back("vmax", format_double(md.big_m));
    } else {
        e.provenance.params.emplace_back("bigM", format_double(md.big_m));
    }
    auto rep = verify_realization(ds, pi, e);
    if (!rep.ok) throw InternalConsistencyError("decode: decoded explanation fails verification");
    return e;
}

}  // namespace bonusrank
