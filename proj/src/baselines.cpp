#include "bonusrank/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "bonusrank/ermb.hpp"
#include "bonusrank/sequence.hpp"

namespace bonusrank {

namespace {

// Tied scores are settled in pi's favour, so the LIS counts what a non-strict check accepts.
std::vector<int> relabel(const Dataset& ds, const std::vector<std::size_t>& pos_pi, const std::vector<double>& w) {
    auto s = scores(ds, w);
    std::vector<std::size_t> order(ds.n());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s[a] != s[b]) return s[a] > s[b];
        return pos_pi[a] < pos_pi[b];
    });
    std::vector<int> seq(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) seq[p] = static_cast<int>(pos_pi[order[p]]) + 1;
    return seq;
}

}  // namespace

std::size_t bonus_count_for(const Dataset& ds, const Ranking& pi, const std::vector<double>& w) {
    auto pos_pi = positions_of(ranking_indices(ds, pi));
    return ds.n() - lis_length(relabel(ds, pos_pi, w));
}

Explanation explanation_for_weights(const Dataset& ds, const Ranking& pi, const std::vector<double>& w) {
    auto order = ranking_indices(ds, pi);
    auto L = lis(relabel(ds, positions_of(order), w));
    std::vector<char> kept(ds.n(), 0);
    for (int v : L.kept) kept[static_cast<std::size_t>(v - 1)] = 1;
    Explanation e;
    e.weights = w;
    e.groups = singleton_bonuses(ds, order, kept, w);
    e.regime = Regime::non_strict();
    return e;
}

BaselineResult sampling_baseline(const Dataset& ds, const Ranking& pi, const SamplingBudget& budget,
                                 std::uint64_t seed, Quadrant quadrant) {
    if (budget.samples == 0 && !(budget.seconds > 0.0))
        throw ContractError("sampling_baseline: budget must allow at least one sample");
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto secs = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };
    auto pos_pi = positions_of(ranking_indices(ds, pi));
    const std::size_t d = ds.d();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    BaselineResult best;
    best.bonus_count = ds.n() + 1;
    std::vector<double> w(d);
    while (true) {
        if (best.samples_tried > 0) {
            if (budget.samples && best.samples_tried >= budget.samples) break;
            if (budget.seconds > 0.0 && secs() >= budget.seconds) break;
        }
        // rejection keeps the draw uniform on the cone's part of the sphere
        double norm = 0.0;
        do {
            norm = 0.0;
            bool inside = true;
            for (auto& x : w) {
                x = normal(rng);
                norm += x * x;
                if (quadrant == Quadrant::Positive && x <= 0.0) inside = false;
            }
            if (!inside) norm = 0.0;
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& x : w) x /= norm;
        ++best.samples_tried;
        std::size_t c = ds.n() - lis_length(relabel(ds, pos_pi, w));
        if (c < best.bonus_count) {
            best.bonus_count = c;
            best.weights = w;
        }
    }
    best.elapsed = secs();
    return best;
}

std::vector<double> pairwise_logistic(const Dataset& ds, const Ranking& pi, std::size_t iterations, double step,
                                      Quadrant quadrant) {
    if (iterations < 1) throw ContractError("pairwise_logistic: iterations must be >= 1");
    if (!(step > 0.0)) throw ContractError("pairwise_logistic: step must be positive");
    auto order = ranking_indices(ds, pi);
    const std::size_t n = ds.n(), d = ds.d();
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += ds.value(i, j) / double(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) sd[j] += (ds.value(i, j) - mean[j]) * (ds.value(i, j) - mean[j]) / double(n);
    for (auto& s : sd) s = std::sqrt(s);
    // standardized tuples in pi order; constant columns drop out
    std::vector<double> X(n * d, 0.0);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t j = 0; j < d; ++j)
            if (sd[j] > 0.0) X[p * d + j] = (ds.value(order[p], j) - mean[j]) / sd[j];

    // pair (a above b) labeled 1 and its mirror labeled 0 contribute the same gradient,
    // so one pass over a < b covers both
    const double pairs = n > 1 ? double(n) * double(n - 1) / 2.0 : 1.0;
    std::vector<double> w(d, 0.0), grad(d), diff(d);
    for (std::size_t it = 0; it < iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                double m = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    diff[j] = X[a * d + j] - X[b * d + j];
                    m += w[j] * diff[j];
                }
                double s = 1.0 / (1.0 + std::exp(m));  // sigma(-m)
                for (std::size_t j = 0; j < d; ++j) grad[j] -= s * diff[j];
            }
        for (std::size_t j = 0; j < d; ++j) {
            w[j] -= step * grad[j] / pairs;
            if (quadrant == Quadrant::Positive && w[j] < 0.0) w[j] = 0.0;
        }
    }
    std::vector<double> out(d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        if (sd[j] > 0.0) out[j] = w[j] / sd[j];
    return out;
}

}  // namespace bonusrank
