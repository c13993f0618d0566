#include "bonusrank/lpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "bonusrank/errors.hpp"

namespace bonusrank {

LinearProgram::LinearProgram(std::size_t n)
    : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInf) {}

std::size_t LinearProgram::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    if (coeffs.size() != num_vars) throw ContractError("LP row arity != variable count");
    rows.push_back({std::move(coeffs), rel, rhs});
    return rows.size() - 1;
}

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
    if (j >= num_vars) throw ContractError("LP variable index out of range");
    lower[j] = lo;
    upper[j] = hi;
}

SparseLinearProgram::SparseLinearProgram(std::size_t n)
    : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInf) {}

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Stalled: return "stalled";
    }
    return "?";
}

double lp_violation(const SparseLinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        worst = std::max(worst, lp.lower[j] - x[j]);
        worst = std::max(worst, x[j] - lp.upper[j]);
    }
    for (const auto& r : lp.rows) {
        double act = 0.0;
        for (auto [j, a] : r.terms) act += a * x[j];
        switch (r.rel) {
            case Relation::LessEq: worst = std::max(worst, act - r.rhs); break;
            case Relation::GreaterEq: worst = std::max(worst, r.rhs - act); break;
            case Relation::Equal: worst = std::max(worst, std::abs(act - r.rhs)); break;
        }
    }
    return worst;
}

namespace {

void validate(const SparseLinearProgram& lp) {
    if (lp.objective.size() != lp.num_vars || lp.lower.size() != lp.num_vars || lp.upper.size() != lp.num_vars)
        throw ContractError("LP vectors do not match variable count");
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        if (!std::isfinite(lp.objective[j])) throw ContractError("LP objective not finite");
        if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] == kInf || lp.upper[j] == -kInf)
            throw ContractError("LP bound invalid");
    }
    for (const auto& r : lp.rows) {
        if (!std::isfinite(r.rhs)) throw ContractError("LP rhs not finite");
        for (auto [j, a] : r.terms) {
            if (j >= lp.num_vars) throw ContractError("LP row references unknown variable");
            if (!std::isfinite(a)) throw ContractError("LP coefficient not finite");
        }
    }
}

struct Reduced {
    bool infeasible = false;
    std::vector<double> lo, hi;            // per original column, tightened
    std::vector<char> fixed;               // original column removed
    std::vector<std::size_t> cols;         // kept original columns
    std::vector<long> new_index;           // original -> kept index or -1
    std::vector<SparseRow> rows;           // over kept indices
};

// Fixed columns are substituted out and singleton rows become bounds, until nothing changes.
Reduced presolve(const SparseLinearProgram& lp, bool enabled, double tol) {
    Reduced R;
    R.lo = lp.lower;
    R.hi = lp.upper;
    const std::size_t n = lp.num_vars;
    std::vector<char> active(lp.rows.size(), 1);
    auto is_fixed = [&](std::size_t j) { return R.lo[j] == R.hi[j]; };

    bool changed = enabled;
    while (changed) {
        changed = false;
        for (std::size_t r = 0; r < lp.rows.size(); ++r) {
            if (!active[r]) continue;
            const auto& row = lp.rows[r];
            double rhs = row.rhs;
            std::size_t live = 0, jj = 0;
            double aa = 0.0;
            for (auto [j, a] : row.terms) {
                if (a == 0.0) continue;
                if (is_fixed(j)) {
                    rhs -= a * R.lo[j];
                } else {
                    ++live;
                    jj = j;
                    aa = a;
                }
            }
            if (live > 1) continue;
            active[r] = 0;
            changed = true;
            if (live == 0) {
                double slackness = tol * (1.0 + std::abs(row.rhs));
                bool ok = (row.rel == Relation::LessEq && 0.0 <= rhs + slackness) ||
                          (row.rel == Relation::GreaterEq && 0.0 >= rhs - slackness) ||
                          (row.rel == Relation::Equal && std::abs(rhs) <= slackness);
                if (!ok) {
                    R.infeasible = true;
                    return R;
                }
                continue;
            }
            double v = rhs / aa;
            bool upper_side = (row.rel == Relation::LessEq) == (aa > 0);
            if (row.rel == Relation::Equal) {
                R.lo[jj] = std::max(R.lo[jj], v);
                R.hi[jj] = std::min(R.hi[jj], v);
            } else if (upper_side) {
                R.hi[jj] = std::min(R.hi[jj], v);
            } else {
                R.lo[jj] = std::max(R.lo[jj], v);
            }
            if (R.lo[jj] > R.hi[jj]) {
                if (R.lo[jj] - R.hi[jj] <= tol * (1.0 + std::abs(R.lo[jj]))) {
                    R.hi[jj] = R.lo[jj];
                } else {
                    R.infeasible = true;
                    return R;
                }
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        if (R.lo[j] > R.hi[j]) {
            R.infeasible = true;
            return R;
        }

    R.fixed.assign(n, 0);
    R.new_index.assign(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        if (enabled && is_fixed(j)) {
            R.fixed[j] = 1;
        } else {
            R.new_index[j] = static_cast<long>(R.cols.size());
            R.cols.push_back(j);
        }
    }
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        if (!active[r]) continue;
        SparseRow nr;
        nr.rel = lp.rows[r].rel;
        nr.rhs = lp.rows[r].rhs;
        for (auto [j, a] : lp.rows[r].terms) {
            if (a == 0.0) continue;
            if (R.fixed[j])
                nr.rhs -= a * R.lo[j];
            else
                nr.terms.emplace_back(static_cast<std::size_t>(R.new_index[j]), a);
        }
        R.rows.push_back(std::move(nr));
    }
    return R;
}

// Bounded-variable primal simplex on a dense tableau.
class Simplex {
public:
    Simplex(const std::vector<SparseRow>& rows, std::size_t nstruct, const std::vector<double>& lo,
            const std::vector<double>& hi, const LpOptions& opt)
        : rows_(rows), m_(rows.size()), ns_(nstruct), opt_(opt) {
        setup(lo, hi);
    }

    // Returns Optimal / Infeasible / Unbounded / Stalled; cost is over structural columns (minimize).
    LpStatus run(const std::vector<double>& cost) {
        if (n_art_ > 0) {
            std::vector<double> c1(nc_, 0.0);
            for (std::size_t a = 0; a < n_art_; ++a) c1[ns_ + m_ + a] = 1.0;
            LpStatus s = iterate(c1, true);
            if (s == LpStatus::Stalled) return s;
            double infeas = 0.0;
            for (std::size_t a = 0; a < n_art_; ++a) infeas += std::abs(x_[ns_ + m_ + a]);
            if (infeas > opt_.feas_tol * (1.0 + bmax_)) return LpStatus::Infeasible;
            drive_out_artificials();
        }
        std::vector<double> c2(nc_, 0.0);
        for (std::size_t j = 0; j < ns_; ++j) c2[j] = cost[j];
        return iterate(c2, false);
    }

    std::vector<double> structural() const { return {x_.begin(), x_.begin() + static_cast<long>(ns_)}; }
    std::size_t iterations() const { return iters_; }

    // Recompute basic values from the original columns (removes accumulated pivot drift).
    void refine() {
        if (m_ == 0) return;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<long>(m_), static_cast<long>(m_));
        Eigen::VectorXd rhs(static_cast<long>(m_));
        for (std::size_t i = 0; i < m_; ++i) rhs(static_cast<long>(i)) = rows_[i].rhs;
        for (std::size_t j = 0; j < nc_; ++j) {
            if (row_of_[j] >= 0) continue;
            if (x_[j] == 0.0) continue;
            add_column(j, -x_[j], rhs);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t b = basis_[i];
            Eigen::VectorXd col = Eigen::VectorXd::Zero(static_cast<long>(m_));
            add_column(b, 1.0, col);
            B.col(static_cast<long>(i)) = col;
        }
        Eigen::VectorXd xb = B.partialPivLu().solve(rhs);
        for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] = xb(static_cast<long>(i));
    }

private:
    void add_column(std::size_t j, double scale, Eigen::VectorXd& v) const {
        if (j < ns_) {
            for (std::size_t i : col_rows_[j]) v(static_cast<long>(i)) += scale * coef(i, j);
        } else if (j < ns_ + m_) {
            v(static_cast<long>(j - ns_)) += scale;
        } else {
            std::size_t r = art_row_[j - ns_ - m_];
            v(static_cast<long>(r)) += scale * art_sign_[j - ns_ - m_];
        }
    }

    double coef(std::size_t i, std::size_t j) const {
        for (auto [c, a] : rows_[i].terms)
            if (c == j) return a;
        return 0.0;
    }

    void setup(const std::vector<double>& lo, const std::vector<double>& hi) {
        col_rows_.assign(ns_, {});
        std::vector<std::size_t> count(ns_, 0);
        for (std::size_t i = 0; i < m_; ++i)
            for (auto [j, a] : rows_[i].terms) {
                if (a == 0.0) continue;
                ++count[j];
                col_rows_[j].push_back(i);
            }
        for (const auto& r : rows_) bmax_ = std::max(bmax_, std::abs(r.rhs));

        // structural nonbasic start values
        std::vector<double> x(ns_);
        for (std::size_t j = 0; j < ns_; ++j)
            x[j] = std::isfinite(lo[j]) ? lo[j] : (std::isfinite(hi[j]) ? hi[j] : 0.0);

        struct Choice {
            int kind;  // 0 slack, 1 structural singleton, 2 artificial
            std::size_t col;
            double scale;
        };
        std::vector<Choice> choice(m_);
        std::vector<double> slack_val(m_, 0.0);
        std::vector<char> used(ns_, 0);
        std::vector<double> need(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double res = rows_[i].rhs;
            for (auto [j, a] : rows_[i].terms) res -= a * x[j];
            double sl = rows_[i].rel == Relation::GreaterEq ? -kInf : 0.0;
            double su = rows_[i].rel == Relation::LessEq ? kInf : 0.0;
            if (res >= sl - opt_.feas_tol && res <= su + opt_.feas_tol) {
                choice[i] = {0, ns_ + i, 1.0};
                slack_val[i] = std::clamp(res, sl, su);
                continue;
            }
            double s = std::clamp(res, sl, su);
            slack_val[i] = s;
            double needed = res - s;
            bool done = false;
            for (auto [j, a] : rows_[i].terms) {
                if (count[j] != 1 || used[j] || a == 0.0) continue;
                double nx = x[j] + needed / a;
                if (nx >= lo[j] - opt_.feas_tol && nx <= hi[j] + opt_.feas_tol) {
                    used[j] = 1;
                    x[j] = nx;
                    choice[i] = {1, j, a};
                    done = true;
                    break;
                }
            }
            if (!done) {
                choice[i] = {2, 0, needed >= 0 ? 1.0 : -1.0};
                need[i] = std::abs(needed);
            }
        }
        for (std::size_t i = 0; i < m_; ++i)
            if (choice[i].kind == 2) {
                choice[i].col = ns_ + m_ + n_art_;
                art_row_.push_back(i);
                art_sign_.push_back(choice[i].scale);
                ++n_art_;
            }
        nc_ = ns_ + m_ + n_art_;
        lo_.assign(nc_, 0.0);
        hi_.assign(nc_, 0.0);
        x_.assign(nc_, 0.0);
        for (std::size_t j = 0; j < ns_; ++j) {
            lo_[j] = lo[j];
            hi_[j] = hi[j];
            x_[j] = x[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            lo_[ns_ + i] = rows_[i].rel == Relation::GreaterEq ? -kInf : 0.0;
            hi_[ns_ + i] = rows_[i].rel == Relation::LessEq ? kInf : 0.0;
            x_[ns_ + i] = slack_val[i];
        }
        for (std::size_t a = 0; a < n_art_; ++a) {
            lo_[ns_ + m_ + a] = 0.0;
            hi_[ns_ + m_ + a] = kInf;
            x_[ns_ + m_ + a] = need[art_row_[a]];
        }

        T_.assign(m_ * nc_, 0.0);
        basis_.assign(m_, 0);
        row_of_.assign(nc_, -1);
        for (std::size_t i = 0; i < m_; ++i) {
            double* t = &T_[i * nc_];
            for (auto [j, a] : rows_[i].terms) t[j] += a;
            t[ns_ + i] = 1.0;
        }
        for (std::size_t a = 0; a < n_art_; ++a) T_[art_row_[a] * nc_ + ns_ + m_ + a] = art_sign_[a];
        for (std::size_t i = 0; i < m_; ++i) {
            double sc = choice[i].scale;
            if (choice[i].kind == 2) sc = art_sign_[choice[i].col - ns_ - m_];
            if (sc != 1.0) {
                double* t = &T_[i * nc_];
                for (std::size_t j = 0; j < nc_; ++j) t[j] /= sc;
            }
            basis_[i] = choice[i].col;
            row_of_[choice[i].col] = static_cast<long>(i);
        }
        max_iter_ = opt_.max_iterations ? opt_.max_iterations : std::max<std::size_t>(20000, 50 * (m_ + nc_));
    }

    void pivot(std::size_t r, std::size_t q) {
        double* tr = &T_[r * nc_];
        double p = tr[q];
        nz_.clear();
        for (std::size_t j = 0; j < nc_; ++j) {
            if (tr[j] == 0.0) continue;
            tr[j] /= p;
            if (std::abs(tr[j]) < 1e-14) {
                tr[j] = 0.0;
                continue;
            }
            nz_.push_back(j);
        }
        tr[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* ti = &T_[i * nc_];
            double f = ti[q];
            if (f == 0.0) continue;
            for (std::size_t j : nz_) {
                double v = ti[j] - f * tr[j];
                ti[j] = std::abs(v) < 1e-14 ? 0.0 : v;
            }
            ti[q] = 0.0;
        }
        double f = d_[q];
        if (f != 0.0)
            for (std::size_t j : nz_) d_[j] -= f * tr[j];
        d_[q] = 0.0;
        row_of_[basis_[r]] = -1;
        basis_[r] = q;
        row_of_[q] = static_cast<long>(r);
    }

    LpStatus iterate(const std::vector<double>& c, bool phase1) {
        d_ = c;
        for (std::size_t i = 0; i < m_; ++i) {
            double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            const double* ti = &T_[i * nc_];
            for (std::size_t j = 0; j < nc_; ++j)
                if (ti[j] != 0.0) d_[j] -= cb * ti[j];
        }
        for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;

        std::size_t degenerate = 0;
        const double piv_tol = 1e-9;
        for (;;) {
            if (iters_ >= max_iter_) return LpStatus::Stalled;
            bool bland = degenerate >= opt_.degenerate_switch;
            long q = -1;
            double best = 0.0;
            for (std::size_t j = 0; j < nc_; ++j) {
                if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
                double dj = d_[j];
                bool inc = dj < -opt_.opt_tol && x_[j] < hi_[j];
                bool dec = dj > opt_.opt_tol && x_[j] > lo_[j];
                if (!inc && !dec) continue;
                if (bland) {
                    q = static_cast<long>(j);
                    break;
                }
                if (std::abs(dj) > best) {
                    best = std::abs(dj);
                    q = static_cast<long>(j);
                }
            }
            if (q < 0) return LpStatus::Optimal;
            const std::size_t qq = static_cast<std::size_t>(q);
            const double dir = d_[qq] < 0 ? 1.0 : -1.0;

            double tmax = (std::isfinite(hi_[qq]) && std::isfinite(lo_[qq])) ? hi_[qq] - lo_[qq] : kInf;
            long r = -1;
            double rbest_abs = 0.0;
            bool r_to_lower = false;
            for (std::size_t i = 0; i < m_; ++i) {
                double a = T_[i * nc_ + qq];
                if (std::abs(a) <= piv_tol) continue;
                double rate = -dir * a;
                std::size_t b = basis_[i];
                double lim;
                bool to_lower;
                if (rate < 0) {
                    if (!std::isfinite(lo_[b])) continue;
                    lim = (x_[b] - lo_[b]) / (-rate);
                    to_lower = true;
                } else {
                    if (!std::isfinite(hi_[b])) continue;
                    lim = (hi_[b] - x_[b]) / rate;
                    to_lower = false;
                }
                if (lim < 0) lim = 0;
                bool take;
                if (r < 0)
                    take = lim < tmax;  // equal to the bound-flip distance: keep the flip
                else if (lim < tmax - 1e-12)
                    take = true;
                else if (lim <= tmax + 1e-12)
                    take = bland ? b < basis_[static_cast<std::size_t>(r)] : std::abs(a) > rbest_abs;
                else
                    take = false;
                if (take) {
                    tmax = std::min(tmax, lim);
                    r = static_cast<long>(i);
                    rbest_abs = std::abs(a);
                    r_to_lower = to_lower;
                }
            }
            if (!std::isfinite(tmax)) {
                if (phase1) return LpStatus::Stalled;  // cannot happen with a bounded phase-1 objective
                return LpStatus::Unbounded;
            }
            ++iters_;
            if (tmax > 0) {
                for (std::size_t i = 0; i < m_; ++i) {
                    double a = T_[i * nc_ + qq];
                    if (a != 0.0) x_[basis_[i]] -= dir * a * tmax;
                }
                x_[qq] += dir * tmax;
            }
            if (r < 0) {
                x_[qq] = dir > 0 ? hi_[qq] : lo_[qq];
            } else {
                std::size_t b = basis_[static_cast<std::size_t>(r)];
                x_[b] = r_to_lower ? lo_[b] : hi_[b];
                pivot(static_cast<std::size_t>(r), qq);
            }
            degenerate = tmax <= 1e-12 ? degenerate + 1 : 0;
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t b = basis_[i];
            if (b < ns_ + m_) continue;
            const double* ti = &T_[i * nc_];
            long best = -1;
            double bv = 1e-7;
            for (std::size_t j = 0; j < ns_ + m_; ++j) {
                if (row_of_[j] >= 0 || lo_[j] == hi_[j]) continue;
                if (std::abs(ti[j]) > bv) {
                    bv = std::abs(ti[j]);
                    best = static_cast<long>(j);
                }
            }
            if (best < 0) {
                // fixed-at-zero columns may still pivot in
                for (std::size_t j = 0; j < ns_ + m_; ++j) {
                    if (row_of_[j] >= 0) continue;
                    if (std::abs(ti[j]) > bv) {
                        bv = std::abs(ti[j]);
                        best = static_cast<long>(j);
                    }
                }
            }
            if (best < 0) continue;  // redundant row; the artificial stays basic at zero
            x_[b] = 0.0;
            pivot(i, static_cast<std::size_t>(best));
        }
        for (std::size_t a = 0; a < n_art_; ++a) {
            std::size_t j = ns_ + m_ + a;
            lo_[j] = hi_[j] = 0.0;
            if (row_of_[j] < 0) x_[j] = 0.0;
        }
    }

    const std::vector<SparseRow>& rows_;
    std::size_t m_, ns_, nc_ = 0, n_art_ = 0;
    LpOptions opt_;
    std::vector<std::vector<std::size_t>> col_rows_;
    std::vector<std::size_t> art_row_;
    std::vector<double> art_sign_;
    std::vector<double> T_, d_, lo_, hi_, x_;
    std::vector<std::size_t> basis_, nz_;
    std::vector<long> row_of_;
    double bmax_ = 0.0;
    std::size_t iters_ = 0, max_iter_ = 0;
};

}  // namespace

LpResult solve_lp(const SparseLinearProgram& lp, const LpOptions& opt) {
    validate(lp);
    LpResult res;
    Reduced R = presolve(lp, opt.presolve, opt.feas_tol);
    if (R.infeasible) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    const double sgn = lp.sense == Sense::Maximize ? -1.0 : 1.0;
    const std::size_t ns = R.cols.size();
    std::vector<double> lo(ns), hi(ns), cost(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        lo[k] = R.lo[R.cols[k]];
        hi[k] = R.hi[R.cols[k]];
        cost[k] = sgn * lp.objective[R.cols[k]];
    }

    std::vector<double> xs;
    if (R.rows.empty()) {
        xs.resize(ns);
        for (std::size_t k = 0; k < ns; ++k) {
            double c = cost[k];
            if (c > 0) {
                if (!std::isfinite(lo[k])) { res.status = LpStatus::Unbounded; return res; }
                xs[k] = lo[k];
            } else if (c < 0) {
                if (!std::isfinite(hi[k])) { res.status = LpStatus::Unbounded; return res; }
                xs[k] = hi[k];
            } else {
                xs[k] = std::isfinite(lo[k]) ? lo[k] : (std::isfinite(hi[k]) ? hi[k] : 0.0);
            }
        }
    } else {
        Simplex sx(R.rows, ns, lo, hi, opt);
        LpStatus st = sx.run(cost);
        res.iterations = sx.iterations();
        if (st != LpStatus::Optimal) {
            res.status = st;
            return res;
        }
        xs = sx.structural();
        auto assemble = [&](const std::vector<double>& v) {
            std::vector<double> x(lp.num_vars);
            for (std::size_t j = 0; j < lp.num_vars; ++j)
                x[j] = R.fixed[j] ? R.lo[j] : v[static_cast<std::size_t>(R.new_index[j])];
            for (std::size_t j = 0; j < lp.num_vars; ++j) {
                // snap values that drifted a hair past a bound
                if (x[j] < lp.lower[j] && x[j] > lp.lower[j] - opt.check_tol) x[j] = lp.lower[j];
                if (x[j] > lp.upper[j] && x[j] < lp.upper[j] + opt.check_tol) x[j] = lp.upper[j];
            }
            return x;
        };
        std::vector<double> x = assemble(xs);
        if (lp_violation(lp, x) > opt.check_tol) {
            sx.refine();
            x = assemble(sx.structural());
        }
        res.x = std::move(x);
    }
    if (res.x.empty()) {
        res.x.resize(lp.num_vars);
        for (std::size_t j = 0; j < lp.num_vars; ++j)
            res.x[j] = R.fixed[j] ? R.lo[j] : xs[static_cast<std::size_t>(R.new_index[j])];
    }
    res.max_violation = lp_violation(lp, res.x);
    if (res.max_violation > opt.check_tol) {
        // never hand back a point that fails substitution
        res.status = LpStatus::Stalled;
        return res;
    }
    res.value = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) res.value += lp.objective[j] * res.x[j];
    res.status = LpStatus::Optimal;
    return res;
}

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    SparseLinearProgram s(lp.num_vars);
    s.sense = lp.sense;
    if (lp.objective.size() == lp.num_vars) s.objective = lp.objective;
    else if (!lp.objective.empty()) throw ContractError("LP objective size != variable count");
    if (lp.lower.size() != lp.num_vars || lp.upper.size() != lp.num_vars)
        throw ContractError("LP bounds size != variable count");
    s.lower = lp.lower;
    s.upper = lp.upper;
    for (const auto& r : lp.rows) {
        if (r.coeffs.size() != lp.num_vars) throw ContractError("LP row arity != variable count");
        SparseRow sr;
        sr.rel = r.rel;
        sr.rhs = r.rhs;
        for (std::size_t j = 0; j < r.coeffs.size(); ++j)
            if (r.coeffs[j] != 0.0) sr.terms.emplace_back(j, r.coeffs[j]);
        s.rows.push_back(std::move(sr));
    }
    return solve_lp(s, opt);
}

WitnessResult interior_witness(const std::vector<std::vector<double>>& normals, const Cone& cone,
                               double norm_cap) {
    const std::size_t d = cone.dim();
    if (d == 0) throw ContractError("interior_witness: empty cone");
    if (!(norm_cap > 0)) throw ContractError("interior_witness: norm_cap must be > 0");
    for (const auto& nrm : normals)
        if (nrm.size() != d) throw ContractError("interior_witness: normal dimension mismatch");

    // columns: p_j (all coordinates), q_j (free coordinates only), s
    std::vector<long> qcol(d, -1);
    std::size_t nv = d;
    for (std::size_t j = 0; j < d; ++j)
        if (!cone.positive[j]) qcol[j] = static_cast<long>(nv++);
    const std::size_t s = nv++;
    SparseLinearProgram lp(nv);
    lp.sense = Sense::Maximize;
    lp.objective[s] = 1.0;
    lp.upper[s] = norm_cap;
    for (const auto& nrm : normals) {
        SparseRow r;
        r.rel = Relation::LessEq;
        r.rhs = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (nrm[j] == 0.0) continue;
            r.terms.emplace_back(j, -nrm[j]);
            if (qcol[j] >= 0) r.terms.emplace_back(static_cast<std::size_t>(qcol[j]), nrm[j]);
        }
        r.terms.emplace_back(s, 1.0);
        lp.rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < d; ++j)
        if (cone.positive[j]) lp.rows.push_back({{{s, 1.0}, {j, -1.0}}, Relation::LessEq, 0.0});
    SparseRow norm;
    norm.rel = Relation::LessEq;
    norm.rhs = norm_cap;
    for (std::size_t j = 0; j < s; ++j) norm.terms.emplace_back(j, 1.0);
    lp.rows.push_back(std::move(norm));

    LpOptions opt;
    opt.presolve = false;
    LpResult r = solve_lp(lp, opt);
    WitnessResult out;
    if (r.status == LpStatus::Stalled) {
        out.status = WitnessStatus::Stalled;
        return out;
    }
    if (r.status != LpStatus::Optimal || !(r.value > kInteriorMargin)) {
        out.status = WitnessStatus::Infeasible;
        return out;
    }
    std::vector<double> w(d);
    double l1 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        w[j] = r.x[j] - (qcol[j] >= 0 ? r.x[static_cast<std::size_t>(qcol[j])] : 0.0);
        l1 += std::abs(w[j]);
    }
    if (!(l1 > 0)) {
        out.status = WitnessStatus::Infeasible;
        return out;
    }
    for (double& v : w) v /= l1;
    double margin = kInf;
    for (const auto& nrm : normals) {
        double t = 0.0;
        for (std::size_t j = 0; j < d; ++j) t += nrm[j] * w[j];
        margin = std::min(margin, t);
    }
    for (std::size_t j = 0; j < d; ++j)
        if (cone.positive[j]) margin = std::min(margin, w[j]);
    if (!(margin > kInteriorMargin)) {
        out.status = WitnessStatus::Infeasible;
        return out;
    }
    out.status = WitnessStatus::Found;
    out.w = std::move(w);
    out.margin = margin;
    return out;
}

}  // namespace bonusrank
