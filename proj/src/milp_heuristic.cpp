#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

#include "bonusrank/milp.hpp"

namespace bonusrank {

namespace {

constexpr double kDpEps = 1e-9;   // gap the DP insists on between adjusted scores
constexpr double kMu = 1e-7;      // gap the elastic LP aims for before rescaling
constexpr double kSolved = 1e-12;

struct Instance {
    std::size_t n = 0, d = 0, k = 0;
    double eps = 0.0, vmax = 0.0;
    std::vector<std::vector<double>> D;  // D[i] = t_{pi_i} - t_{pi_{i+1}}
    std::vector<char> must, never;       // per position: boost required / forbidden
};

std::optional<Instance> read_instance(const MilpModel& m) {
    Instance I;
    I.n = m.meta.n;
    I.d = m.meta.d;
    I.k = m.meta.k;
    I.eps = m.meta.epsilon;
    I.vmax = m.meta.big_m;
    if (I.n < 2 || m.meta.g < 1) return std::nullopt;
    std::vector<std::size_t> wv(I.d);
    for (std::size_t j = 0; j < I.d; ++j) wv[j] = m.var(w_name(j + 1));
    I.D.assign(I.n - 1, std::vector<double>(I.d, 0.0));
    for (std::size_t i = 0; i + 1 < I.n; ++i) {
        auto c = m.find_constraint("ord_" + std::to_string(i + 1));
        if (!c) return std::nullopt;
        for (auto [j, a] : m.cons[*c].terms)
            for (std::size_t q = 0; q < I.d; ++q)
                if (wv[q] == j) I.D[i][q] = a;
    }
    I.must.assign(I.n, 0);
    I.never.assign(I.n, 0);
    for (std::size_t i = 0; i < I.n; ++i) {
        if (m.find_constraint("force_" + std::to_string(i + 1))) I.must[i] = 1;
        const auto& dv = m.vars[m.var(delta_name(i + 1, 1))];
        if (dv.hi < 0.5) I.never[i] = 1;
        if (dv.lo > 0.5) I.must[i] = 1;
        if (I.must[i] && I.never[i]) return std::nullopt;
    }
    return I;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

// min sum e  s.t.  D_i w + e_i >= 0, sum w = 1, w >= 0
std::optional<std::vector<double>> l1_fit(const Instance& I) {
    const std::size_t m = I.n - 1;
    SparseLinearProgram lp(I.d + m);
    for (std::size_t i = 0; i < m; ++i) {
        lp.objective[I.d + i] = 1.0;
        SparseRow r;
        for (std::size_t j = 0; j < I.d; ++j)
            if (I.D[i][j] != 0.0) r.terms.emplace_back(j, I.D[i][j]);
        r.terms.emplace_back(I.d + i, 1.0);
        r.rel = Relation::GreaterEq;
        lp.rows.push_back(std::move(r));
    }
    SparseRow norm;
    for (std::size_t j = 0; j < I.d; ++j) norm.terms.emplace_back(j, 1.0);
    norm.rel = Relation::Equal;
    norm.rhs = 1.0;
    lp.rows.push_back(std::move(norm));
    auto r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return std::nullopt;
    return std::vector<double>(r.x.begin(), r.x.begin() + static_cast<long>(I.d));
}

struct Elastic {
    bool ok = false;
    std::vector<double> w;
    double beta = 0.0;
    double viol = 0.0;
    std::vector<double> e;
};

// Boosted set fixed: min sum e  s.t.  D_i w + (S_i - S_{i+1}) beta + e_i >= mu, sum w = 1.
Elastic elastic_lp(const Instance& I, const std::vector<char>& S) {
    const std::size_t m = I.n - 1, bj = I.d;
    SparseLinearProgram lp(I.d + 1 + m);
    for (std::size_t i = 0; i < m; ++i) {
        lp.objective[I.d + 1 + i] = 1.0;
        SparseRow r;
        for (std::size_t j = 0; j < I.d; ++j)
            if (I.D[i][j] != 0.0) r.terms.emplace_back(j, I.D[i][j]);
        int ds = int(S[i]) - int(S[i + 1]);
        if (ds != 0) r.terms.emplace_back(bj, double(ds));
        r.terms.emplace_back(I.d + 1 + i, 1.0);
        r.rel = Relation::GreaterEq;
        r.rhs = kMu;
        lp.rows.push_back(std::move(r));
    }
    SparseRow norm;
    for (std::size_t j = 0; j < I.d; ++j) norm.terms.emplace_back(j, 1.0);
    norm.rel = Relation::Equal;
    norm.rhs = 1.0;
    lp.rows.push_back(std::move(norm));
    auto r = solve_lp(lp);
    Elastic out;
    if (r.status != LpStatus::Optimal) return out;
    out.ok = true;
    out.w.assign(r.x.begin(), r.x.begin() + static_cast<long>(I.d));
    out.beta = r.x[bj];
    out.e.assign(r.x.begin() + static_cast<long>(I.d + 1), r.x.end());
    out.viol = 0.0;
    for (double v : out.e) out.viol += v;
    return out;
}

struct Pick {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<char> S;
};

// Exact DP over boosted/not states for a fixed beta: cost = boosts + lambda * violated gaps.
Pick dp_penalized(const Instance& I, const std::vector<double>& s, double beta, double lam) {
    const std::size_t n = I.n;
    constexpr double INF = std::numeric_limits<double>::infinity();
    std::vector<std::array<char, 2>> back(n);
    std::array<double, 2> c{I.must[0] ? INF : 0.0, I.never[0] ? INF : 1.0};
    for (std::size_t i = 1; i < n; ++i) {
        std::array<double, 2> nc{INF, INF};
        for (int b = 0; b < 2; ++b) {
            if ((b == 0 && I.must[i]) || (b == 1 && I.never[i])) continue;
            for (int a = 0; a < 2; ++a) {
                if (c[a] == INF) continue;
                bool ok = s[i - 1] + beta * a - s[i] - beta * b >= kDpEps;
                double val = c[a] + b + (ok ? 0.0 : lam);
                if (val < nc[b]) {
                    nc[b] = val;
                    back[i][b] = static_cast<char>(a);
                }
            }
        }
        c = nc;
    }
    Pick p;
    int b = c[1] < c[0] ? 1 : 0;
    p.cost = c[b];
    if (p.cost == INF) return p;
    p.S.assign(n, 0);
    for (std::size_t i = n; i-- > 0;) {
        p.S[i] = static_cast<char>(b);
        if (i > 0) b = back[i][b];
    }
    return p;
}

Pick scan_beta(const Instance& I, const std::vector<double>& s, double lam) {
    std::vector<double> cand{0.0};
    for (std::size_t i = 0; i + 1 < s.size(); ++i) cand.push_back(std::abs(s[i] - s[i + 1]));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    Pick best;
    for (std::size_t q = 0; q < cand.size(); ++q) {
        double beta = q + 1 < cand.size() ? 0.5 * (cand[q] + cand[q + 1]) : cand[q] * 1.01 + 1e-9;
        Pick p = dp_penalized(I, s, beta, lam);
        if (p.cost < best.cost) best = std::move(p);
    }
    return best;
}

std::size_t boosted(const std::vector<char>& S) { return static_cast<std::size_t>(std::count(S.begin(), S.end(), 1)); }

}  // namespace

std::optional<std::vector<double>> refined_heuristic(const MilpModel& model, double time_limit) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto out_of_time = [&] {
        return time_limit > 0.0 && std::chrono::duration<double>(clock::now() - t0).count() >= time_limit;
    };
    auto inst = read_instance(model);
    if (!inst) return std::nullopt;
    const Instance& I = *inst;

    auto w0 = l1_fit(I);
    if (!w0) return std::nullopt;
    std::vector<double> w = *w0;
    std::vector<char> S;
    Elastic cur;
    double lam = 2.0, best_viol = std::numeric_limits<double>::infinity();
    bool solved = false;
    std::vector<double> s(I.n);

    for (int it = 0; it < 40 && !solved && !out_of_time(); ++it) {
        s[0] = 0.0;
        for (std::size_t i = 0; i + 1 < I.n; ++i) s[i + 1] = s[i] - dot(I.D[i], w);
        Pick p = scan_beta(I, s, lam);
        if (p.S.empty()) return std::nullopt;
        S = std::move(p.S);
        cur = elastic_lp(I, S);
        if (!cur.ok) return std::nullopt;
        w = cur.w;
        if (cur.viol < kSolved) {
            solved = true;
            break;
        }
        if (cur.viol >= best_viol - 1e-9) {
            // stalled: local repair by toggling either end of a violated gap
            for (int round = 0; round < 60 && !out_of_time(); ++round) {
                Elastic best_e;
                std::vector<char> best_S;
                double target = cur.viol - 1e-9;
                for (std::size_t r = 0; r + 1 < I.n; ++r) {
                    if (cur.e[r] <= 1e-9) continue;
                    for (std::size_t pos : {r, r + 1}) {
                        if ((S[pos] && I.must[pos]) || (!S[pos] && I.never[pos])) continue;
                        auto S2 = S;
                        S2[pos] ^= 1;
                        auto e2 = elastic_lp(I, S2);
                        if (e2.ok && e2.viol < target) {
                            target = e2.viol;
                            best_e = std::move(e2);
                            best_S = std::move(S2);
                        }
                    }
                }
                if (best_S.empty()) break;
                S = std::move(best_S);
                cur = std::move(best_e);
                w = cur.w;
                if (cur.viol < kSolved) break;
            }
            if (cur.viol < kSolved) {
                solved = true;
                break;
            }
            lam *= 2.0;
        }
        best_viol = std::min(best_viol, cur.viol);
    }
    if (!solved || boosted(S) > I.k) return std::nullopt;

    // rescale to model units: twice the required margin, bonus within its cap
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < I.n; ++i)
        margin = std::min(margin, dot(I.D[i], cur.w) + (int(S[i]) - int(S[i + 1])) * cur.beta);
    std::vector<double> x(model.vars.size(), 0.0);
    for (std::size_t i = 0; i < I.n; ++i) x[model.var(delta_name(i + 1, 1))] = S[i];
    if (margin > 0.0) {
        double c = 2.0 * I.eps / margin;
        if (c * cur.beta <= I.vmax) {
            for (std::size_t j = 0; j < I.d; ++j) x[model.var(w_name(j + 1))] = c * cur.w[j];
            double v = c * cur.beta;
            x[model.var(v_name(1))] = v;
            for (std::size_t i = 0; i < I.n; ++i) x[model.var(z_name(i + 1, 1))] = S[i] ? v : 0.0;
            if (model.violation(x) <= kMilpTol) return x;
        }
    }
    return solve_fixed(model, x);
}

}  // namespace bonusrank
