#include "bonusrank/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace bonusrank {

std::vector<ComparisonHyperplane> build_hyperplanes(const Dataset& ds) {
    if (ds.n() < 2) throw ContractError("build_hyperplanes: needs n >= 2");
    std::vector<ComparisonHyperplane> out;
    out.reserve(ds.n() * (ds.n() - 1) / 2);
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t j = i + 1; j < ds.n(); ++j) {
            ComparisonHyperplane h;
            h.i = i;
            h.j = j;
            h.normal.resize(ds.d());
            bool zero = true;
            for (std::size_t c = 0; c < ds.d(); ++c) {
                h.normal[c] = ds.value(i, c) - ds.value(j, c);
                if (h.normal[c] != 0.0) zero = false;
            }
            h.degenerate = zero;
            out.push_back(std::move(h));
        }
    return out;
}

Cone cone_for(Quadrant q, std::size_t d) {
    return q == Quadrant::Positive ? Cone::positive_orthant(d) : Cone::full(d);
}

Ranking SignRegion::ranking(const Dataset& ds) const {
    Ranking r;
    for (std::size_t i : order) r.order.push_back(ds.id(i));
    return r;
}

std::string SignRegion::signs(const Dataset& ds) const {
    auto pos = positions_of(order);
    auto dup = duplicate_classes(ds);
    std::string s;
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t j = i + 1; j < ds.n(); ++j)
            s += dup[i] == dup[j] ? '0' : (pos[i] < pos[j] ? '+' : '-');
    return s;
}

std::vector<std::size_t> duplicate_classes(const Dataset& ds) {
    std::map<std::vector<double>, std::size_t> cls;
    std::vector<std::size_t> out(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        auto r = ds.row(i);
        std::vector<double> key(r.begin(), r.end());
        auto it = cls.emplace(std::move(key), i).first;
        out[i] = it->second;
    }
    return out;
}

int compare_sign_vectors(const std::vector<std::size_t>& pa, const std::vector<std::size_t>& pb,
                         const std::vector<std::size_t>& dup) {
    const std::size_t n = pa.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool a = pa[i] < pa[j], b = pb[i] < pb[j];
            if (a == b || dup[i] == dup[j]) continue;
            return a ? -1 : 1;
        }
    return 0;
}

namespace {

struct Ctx {
    const Dataset& ds;
    const Cone& cone;
    const RegionVisitor& visit;
    const RegionOptions& opt;
    RegionStats stats;
    std::vector<std::size_t> dup;
    bool stopped = false;

    Ctx(const Dataset& d, const Cone& c, const RegionVisitor& v, const RegionOptions& o)
        : ds(d), cone(c), visit(v), opt(o), dup(duplicate_classes(d)) {}

    double margin_of(const std::vector<double>& w, const std::vector<std::size_t>& order) const {
        double m = kInf;
        for (std::size_t j = 0; j < w.size(); ++j)
            if (cone.positive[j]) m = std::min(m, w[j]);
        double prev = 0.0;
        for (std::size_t p = 0; p < order.size(); ++p) {
            double s = linear_score(w, ds.row(order[p]));
            if (p > 0 && dup[order[p]] != dup[order[p - 1]]) m = std::min(m, prev - s);
            prev = s;
        }
        return m;
    }

    // Normalise, check the margin and fall back to a max-margin LP over the consecutive pairs.
    // Emits the region unless it is thin. Returns false when the visitor asked to stop.
    bool emit(std::vector<double> w, std::vector<std::size_t> order) {
        ++stats.candidates;
        double l1 = 0.0;
        for (double v : w) l1 += std::abs(v);
        if (!(l1 > 0)) return true;
        for (double& v : w) v /= l1;
        double m = margin_of(w, order);
        if (!(m >= kInteriorMargin)) {
            std::vector<std::vector<double>> normals;
            for (std::size_t p = 0; p + 1 < order.size(); ++p) {
                std::size_t a = order[p], b = order[p + 1];
                if (dup[a] == dup[b]) continue;
                std::vector<double> nrm(ds.d());
                for (std::size_t c = 0; c < ds.d(); ++c) nrm[c] = ds.value(a, c) - ds.value(b, c);
                normals.push_back(std::move(nrm));
            }
            WitnessResult wr;
            if (normals.empty()) {
                // every tuple identical: any cone point works
                wr.status = WitnessStatus::Found;
                wr.w.assign(ds.d(), 1.0 / static_cast<double>(ds.d()));
            } else {
                ++stats.lp_solves;
                wr = interior_witness(normals, cone);
            }
            if (wr.status == WitnessStatus::Stalled) {
                ++stats.lp_failures;
                return true;
            }
            if (wr.status != WitnessStatus::Found) {
                ++stats.thin_skipped;
                return true;
            }
            auto o2 = order_from_weights(ds, wr.w);
            if (o2 != order) {
                ++stats.thin_skipped;
                return true;
            }
            w = wr.w;
            m = margin_of(w, order);
            if (!(m >= kInteriorMargin)) {
                ++stats.thin_skipped;
                return true;
            }
        }
        if (opt.max_regions && stats.yielded >= opt.max_regions)
            throw RefusalError("region enumeration exceeded the cap of " + std::to_string(opt.max_regions) +
                               " regions");
        SignRegion r;
        r.witness = std::move(w);
        r.order = std::move(order);
        r.margin = m;
        ++stats.yielded;
        if (!visit(r)) {
            stopped = true;
            return false;
        }
        return true;
    }
};

// Sorted, tie-broken order re-established from a nearly sorted previous one.
void insertion_resort(std::vector<std::size_t>& order, const std::vector<double>& s, const Dataset& ds) {
    auto before = [&](std::size_t a, std::size_t b) {
        if (s[a] != s[b]) return s[a] > s[b];
        return ds.id(a) < ds.id(b);
    };
    for (std::size_t p = 1; p < order.size(); ++p) {
        std::size_t v = order[p];
        std::size_t q = p;
        while (q > 0 && before(v, order[q - 1])) {
            order[q] = order[q - 1];
            --q;
        }
        order[q] = v;
    }
}

void sweep_1d(Ctx& c) {
    std::vector<std::vector<double>> dirs{{1.0}};
    if (!c.cone.positive[0]) dirs.push_back({-1.0});
    for (auto& w : dirs) {
        auto o = order_from_weights(c.ds, w);
        if (!c.emit(w, std::move(o))) return;
    }
}

void sweep_2d(Ctx& c) {
    const double pi = std::numbers::pi;
    // admissible arc of directions theta, with w = (cos, sin)
    double lo, hi;
    bool circle = false;
    if (c.cone.positive[0] && c.cone.positive[1]) {
        lo = 0.0, hi = pi / 2;
    } else if (c.cone.positive[0]) {
        lo = -pi / 2, hi = pi / 2;
    } else if (c.cone.positive[1]) {
        lo = 0.0, hi = pi;
    } else {
        lo = 0.0, hi = 2 * pi;
        circle = true;
    }
    std::vector<double> ang;
    for (std::size_t i = 0; i < c.ds.n(); ++i)
        for (std::size_t j = i + 1; j < c.ds.n(); ++j) {
            double a = c.ds.value(i, 0) - c.ds.value(j, 0);
            double b = c.ds.value(i, 1) - c.ds.value(j, 1);
            if (a == 0.0 && b == 0.0) continue;
            double t = std::atan2(-a, b);  // a cos t + b sin t = 0
            for (double cand : {t - 2 * pi, t - pi, t, t + pi, t + 2 * pi}) {
                if (circle) {
                    if (cand >= 0.0 && cand < 2 * pi) ang.push_back(cand);
                } else if (cand > lo && cand < hi) {
                    ang.push_back(cand);
                }
            }
        }
    std::sort(ang.begin(), ang.end());
    std::vector<double> crit;
    for (double a : ang)
        if (crit.empty() || a - crit.back() > 1e-12) crit.push_back(a);
    if (circle && crit.size() > 1 && crit.front() + 2 * pi - crit.back() <= 1e-12) crit.pop_back();

    std::vector<std::pair<double, double>> intervals;
    if (circle) {
        if (crit.empty()) {
            intervals.emplace_back(0.0, 2 * pi);
        } else {
            for (std::size_t k = 0; k + 1 < crit.size(); ++k) intervals.emplace_back(crit[k], crit[k + 1]);
            intervals.emplace_back(crit.back(), crit.front() + 2 * pi);
        }
    } else {
        double prev = lo;
        for (double a : crit) {
            intervals.emplace_back(prev, a);
            prev = a;
        }
        intervals.emplace_back(prev, hi);
    }

    std::vector<std::size_t> order;
    std::vector<double> s(c.ds.n());
    for (auto [a, b] : intervals) {
        double t = 0.5 * (a + b);
        std::vector<double> w{std::cos(t), std::sin(t)};
        for (std::size_t i = 0; i < c.ds.n(); ++i) s[i] = w[0] * c.ds.value(i, 0) + w[1] * c.ds.value(i, 1);
        if (order.empty()) {
            order = order_from_weights(c.ds, w);
        } else {
            insertion_resort(order, s, c.ds);
        }
        if (!c.emit(w, order)) return;
    }
}

std::vector<double> unit(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    return v;
}

// Distinct hyperplane normals (parallel duplicates dropped), in build order.
std::vector<std::vector<double>> distinct_normals(const Dataset& ds) {
    std::vector<std::vector<double>> out;
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t j = i + 1; j < ds.n(); ++j) {
            std::vector<double> nrm(ds.d());
            bool zero = true;
            for (std::size_t c = 0; c < ds.d(); ++c) {
                nrm[c] = ds.value(i, c) - ds.value(j, c);
                if (nrm[c] != 0.0) zero = false;
            }
            if (zero) continue;
            auto u = unit(nrm);
            // canonical orientation, rounded so that parallel normals collide
            std::size_t f = 0;
            while (u[f] == 0.0) ++f;
            double sg = u[f] < 0 ? -1.0 : 1.0;
            std::vector<double> key(u.size());
            for (std::size_t c = 0; c < u.size(); ++c) key[c] = std::round(sg * u[c] * 1e12) / 1e12;
            if (!seen.insert(key).second) continue;
            out.push_back(std::move(nrm));
        }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> cross(const std::vector<double>& a, const std::vector<double>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Faces of the great-circle arrangement on the sphere: every face borders some arc, so
// stepping off each arc midpoint to both sides reaches all of them.
void sphere_3d(Ctx& c) {
    std::vector<std::vector<double>> planes;
    for (auto& nrm : distinct_normals(c.ds)) planes.push_back(unit(nrm));
    for (std::size_t j = 0; j < 3; ++j)
        if (c.cone.positive[j]) {
            std::vector<double> e(3, 0.0);
            e[j] = 1.0;
            bool dupe = false;
            for (auto& p : planes)
                if (std::abs(std::abs(dot(p, e)) - 1.0) < 1e-15) dupe = true;
            if (!dupe) planes.push_back(e);
        }
    std::set<std::vector<std::size_t>> seen;
    auto inside_cone = [&](const std::vector<double>& q) {
        for (std::size_t j = 0; j < 3; ++j)
            if (c.cone.positive[j] && !(q[j] > 0)) return false;
        return true;
    };
    auto try_point = [&](std::vector<double> q) {
        if (!inside_cone(q)) return true;
        auto o = order_from_weights(c.ds, q);
        if (!seen.insert(o).second) return true;
        return c.emit(std::move(q), std::move(o));
    };
    if (planes.empty()) {
        try_point({1.0, 1.0, 1.0});
        return;
    }
    const double pi = std::numbers::pi;
    for (std::size_t h = 0; h < planes.size(); ++h) {
        const auto& nh = planes[h];
        std::vector<double> a = std::abs(nh[0]) < 0.9 ? std::vector<double>{1, 0, 0} : std::vector<double>{0, 1, 0};
        double t = dot(a, nh);
        for (std::size_t k = 0; k < 3; ++k) a[k] -= t * nh[k];
        a = unit(a);
        std::vector<double> b = cross(nh, a);
        std::vector<double> phis;
        for (std::size_t j = 0; j < planes.size(); ++j) {
            if (j == h) continue;
            auto u = cross(nh, planes[j]);
            double len = std::sqrt(dot(u, u));
            if (len < 1e-15) continue;
            double phi = std::atan2(dot(u, b), dot(u, a));
            if (phi < 0) phi += 2 * pi;
            phis.push_back(phi);
            phis.push_back(phi + pi >= 2 * pi ? phi - pi : phi + pi);
        }
        std::sort(phis.begin(), phis.end());
        std::vector<double> crit;
        for (double p : phis)
            if (crit.empty() || p - crit.back() > 1e-12) crit.push_back(p);
        if (crit.size() > 1 && crit.front() + 2 * pi - crit.back() <= 1e-12) crit.pop_back();
        if (crit.empty()) crit = {0.0, pi};
        for (std::size_t k = 0; k < crit.size(); ++k) {
            double p0 = crit[k];
            double p1 = k + 1 < crit.size() ? crit[k + 1] : crit.front() + 2 * pi;
            double pm = 0.5 * (p0 + p1);
            std::vector<double> p(3);
            for (std::size_t r = 0; r < 3; ++r) p[r] = std::cos(pm) * a[r] + std::sin(pm) * b[r];
            double eta = 0.5;
            for (std::size_t j = 0; j < planes.size(); ++j) {
                if (j == h) continue;
                double cj = std::abs(dot(planes[j], nh));
                if (cj < 1e-15) continue;
                eta = std::min(eta, 0.5 * std::abs(dot(planes[j], p)) / cj);
            }
            for (double sg : {1.0, -1.0}) {
                std::vector<double> q(3);
                for (std::size_t r = 0; r < 3; ++r) q[r] = p[r] + sg * eta * nh[r];
                if (!try_point(std::move(q))) return;
            }
        }
    }
}

// Breadth-first refinement over hyperplanes in insertion order; each cell keeps an interior
// witness and only the side opposite to it needs an LP.
void generic_bfs(Ctx& c) {
    const std::size_t d = c.ds.d();
    auto planes = distinct_normals(c.ds);
    struct Cell {
        std::vector<signed char> side;
        std::vector<double> w;
    };
    std::vector<double> w0(d, 1.0 / static_cast<double>(d));
    std::vector<Cell> cells{{{}, w0}};
    auto solve = [&](const std::vector<signed char>& side) -> std::optional<std::vector<double>> {
        std::vector<std::vector<double>> normals;
        normals.reserve(side.size());
        for (std::size_t p = 0; p < side.size(); ++p) {
            std::vector<double> nrm = planes[p];
            if (side[p] < 0)
                for (double& v : nrm) v = -v;
            normals.push_back(std::move(nrm));
        }
        ++c.stats.lp_solves;
        auto r = interior_witness(normals, c.cone);
        if (r.status == WitnessStatus::Stalled) ++c.stats.lp_failures;
        if (r.status != WitnessStatus::Found) return std::nullopt;
        return r.w;
    };
    for (std::size_t h = 0; h < planes.size(); ++h) {
        std::vector<Cell> next;
        next.reserve(cells.size() * 2);
        for (auto& cell : cells) {
            double val = dot(planes[h], cell.w);
            if (std::abs(val) > kInteriorMargin) {
                signed char sg = val > 0 ? 1 : -1;
                Cell keep{cell.side, cell.w};
                keep.side.push_back(sg);
                Cell flip{cell.side, {}};
                flip.side.push_back(static_cast<signed char>(-sg));
                next.push_back(std::move(keep));
                if (auto w = solve(flip.side)) {
                    flip.w = *w;
                    next.push_back(std::move(flip));
                }
            } else {
                for (signed char sg : {1, -1}) {
                    Cell ch{cell.side, {}};
                    ch.side.push_back(sg);
                    if (auto w = solve(ch.side)) {
                        ch.w = *w;
                        next.push_back(std::move(ch));
                    }
                }
            }
        }
        cells = std::move(next);
        if (c.opt.max_regions && cells.size() > c.opt.max_regions)
            throw RefusalError("region enumeration exceeded the cap of " + std::to_string(c.opt.max_regions) +
                               " regions");
    }
    for (auto& cell : cells) {
        auto o = order_from_weights(c.ds, cell.w);
        if (!c.emit(cell.w, std::move(o))) return;
    }
}

}  // namespace

RegionStats enumerate_regions(const Dataset& ds, const Cone& cone, const RegionVisitor& visit,
                              const RegionOptions& opt) {
    if (cone.dim() != ds.d()) throw ContractError("enumerate_regions: cone dimension != d");
    Ctx c(ds, cone, visit, opt);
    if (opt.method == RegionMethod::Generic && ds.d() >= 2)
        generic_bfs(c);
    else if (ds.d() == 1)
        sweep_1d(c);
    else if (ds.d() == 2)
        sweep_2d(c);
    else if (ds.d() == 3)
        sphere_3d(c);
    else
        generic_bfs(c);
    return c.stats;
}

RegionStats enumerate_regions(const Dataset& ds, Quadrant q, const RegionVisitor& visit, const RegionOptions& opt) {
    return enumerate_regions(ds, cone_for(q, ds.d()), visit, opt);
}

RegionStats enumerate_regions_2d(const Dataset& ds, Quadrant q, const RegionVisitor& visit) {
    if (ds.d() != 2) throw ContractError("enumerate_regions_2d: needs d = 2");
    Cone cone = cone_for(q, 2);
    RegionOptions opt;
    Ctx c(ds, cone, visit, opt);
    sweep_2d(c);
    return c.stats;
}

std::vector<SignRegion> collect_regions(const Dataset& ds, Quadrant q, const RegionOptions& opt, RegionStats* stats) {
    std::vector<SignRegion> out;
    auto st = enumerate_regions(
        ds, q,
        [&](const SignRegion& r) {
            out.push_back(r);
            return true;
        },
        opt);
    if (stats) *stats = st;
    return out;
}

}  // namespace bonusrank
