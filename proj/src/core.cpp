#include "bonusrank/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace bonusrank {

static std::string default_attr_name(std::size_t j) { return "a" + std::to_string(j + 1); }

Dataset::Dataset(std::vector<std::string> ids, const std::vector<std::vector<double>>& rows,
                 std::vector<std::string> attr_names, std::optional<std::vector<std::string>> planted)
    : ids_(std::move(ids)), attr_names_(std::move(attr_names)), planted_(std::move(planted)) {
    if (rows.size() != ids_.size())
        throw ContractError("dataset: " + std::to_string(ids_.size()) + " ids but " +
                            std::to_string(rows.size()) + " rows");
    d_ = rows.empty() ? attr_names_.size() : rows.front().size();
    values_.reserve(rows.size() * d_);
    for (const auto& r : rows) {
        if (r.size() != d_) throw ContractError("dataset: ragged rows");
        values_.insert(values_.end(), r.begin(), r.end());
    }
    validate();
}

Dataset::Dataset(std::vector<std::string> ids, std::vector<double> flat_values, std::size_t d,
                 std::vector<std::string> attr_names, std::optional<std::vector<std::string>> planted)
    : ids_(std::move(ids)),
      attr_names_(std::move(attr_names)),
      values_(std::move(flat_values)),
      d_(d),
      planted_(std::move(planted)) {
    if (values_.size() != ids_.size() * d_)
        throw ContractError("dataset: value count does not match n*d");
    validate();
}

void Dataset::validate() {
    if (ids_.empty()) throw ContractError("dataset: needs at least one tuple");
    if (d_ == 0) throw ContractError("dataset: needs at least one attribute");
    if (attr_names_.empty())
        for (std::size_t j = 0; j < d_; ++j) attr_names_.push_back(default_attr_name(j));
    if (attr_names_.size() != d_) throw ContractError("dataset: attr_names size != d");
    for (double v : values_)
        if (!std::isfinite(v)) throw ContractError("dataset: non-finite value");
    if (planted_ && planted_->size() != ids_.size())
        throw ContractError("dataset: planted labels size != n");
    index_.clear();
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i].empty()) throw ContractError("dataset: empty id");
        if (!index_.emplace(ids_[i], i).second) throw ContractError("dataset: duplicate id " + ids_[i]);
    }
}

std::optional<std::size_t> Dataset::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Dataset::index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ContractError("unknown id: " + id);
    return it->second;
}

Dataset Dataset::with_column(std::size_t j, const std::vector<double>& column) const {
    if (j >= d_ || column.size() != n()) throw ContractError("with_column: bad shape");
    std::vector<double> v = values_;
    for (std::size_t i = 0; i < n(); ++i) v[i * d_ + j] = column[i];
    return Dataset(ids_, std::move(v), d_, attr_names_, planted_);
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    std::vector<std::string> ids;
    std::vector<double> v;
    std::optional<std::vector<std::string>> pl;
    if (planted_) pl.emplace();
    for (std::size_t r : rows) {
        if (r >= n()) throw ContractError("subset: row out of range");
        ids.push_back(ids_[r]);
        auto rr = row(r);
        v.insert(v.end(), rr.begin(), rr.end());
        if (pl) pl->push_back((*planted_)[r]);
    }
    return Dataset(std::move(ids), std::move(v), d_, attr_names_, std::move(pl));
}

Regime Regime::strict_eps(double eps) {
    if (!(eps > 0)) throw ContractError("strict regime needs epsilon > 0");
    return {true, eps};
}

std::size_t Explanation::bonus_count() const {
    std::size_t c = 0;
    for (const auto& g : groups) c += g.members.size();
    return c;
}

void ProblemSpec::validate() const {
    if (variant == Variant::Multigroup && g < 1) throw ContractError("multigroup needs g >= 1");
    if (regime.strict && !(regime.epsilon > 0)) throw ContractError("strict regime needs epsilon > 0");
}

double linear_score(std::span<const double> weights, std::span<const double> tuple_values) {
    if (weights.size() != tuple_values.size())
        throw ContractError("linear_score: dimension mismatch (" + std::to_string(weights.size()) +
                            " vs " + std::to_string(tuple_values.size()) + ")");
    double s = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!std::isfinite(weights[j]) || !std::isfinite(tuple_values[j]))
            throw ContractError("linear_score: non-finite input");
        s += weights[j] * tuple_values[j];
    }
    return s;
}

double bonus_score(const Explanation& explanation, const std::string& id,
                   std::span<const double> tuple_values) {
    double s = linear_score(explanation.weights, tuple_values);
    const Group* hit = nullptr;
    for (const auto& g : explanation.groups) {
        if (std::find(g.members.begin(), g.members.end(), id) == g.members.end()) continue;
        if (hit) throw InvariantError("id " + id + " appears in two groups");
        hit = &g;
    }
    return hit ? s + hit->bonus : s;
}

std::vector<double> bonus_vector(const Dataset& dataset, const Explanation& explanation) {
    std::vector<double> b(dataset.n(), 0.0);
    std::vector<char> seen(dataset.n(), 0);
    for (const auto& g : explanation.groups) {
        if (!std::isfinite(g.bonus)) throw ContractError("non-finite bonus");
        for (const auto& id : g.members) {
            std::size_t i = dataset.index(id);
            if (seen[i]) throw InvariantError("id " + id + " appears in two groups");
            seen[i] = 1;
            b[i] = g.bonus;
        }
    }
    return b;
}

std::vector<double> scores(const Dataset& dataset, std::span<const double> weights) {
    if (weights.size() != dataset.d()) throw ContractError("weights dimension != d");
    std::vector<double> s(dataset.n());
    for (std::size_t i = 0; i < dataset.n(); ++i) s[i] = linear_score(weights, dataset.row(i));
    return s;
}

std::vector<std::size_t> ranking_indices(const Dataset& dataset, const Ranking& ranking) {
    if (ranking.size() != dataset.n())
        throw ContractError("ranking has " + std::to_string(ranking.size()) + " entries, dataset has " +
                            std::to_string(dataset.n()));
    std::vector<std::size_t> idx(ranking.size());
    std::vector<char> seen(dataset.n(), 0);
    for (std::size_t p = 0; p < ranking.size(); ++p) {
        auto i = dataset.find(ranking.order[p]);
        if (!i) throw ContractError("ranking id not in dataset: " + ranking.order[p]);
        if (seen[*i]) throw ContractError("ranking repeats id: " + ranking.order[p]);
        seen[*i] = 1;
        idx[p] = *i;
    }
    return idx;
}

std::vector<std::size_t> positions_of(const std::vector<std::size_t>& order) {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
    return pos;
}

VerifyReport verify_realization(const Dataset& dataset, const Ranking& ranking,
                                const Explanation& explanation, double tol) {
    auto order = ranking_indices(dataset, ranking);
    if (explanation.weights.size() != dataset.d())
        throw ContractError("explanation weights dimension != d");
    auto bonus = bonus_vector(dataset, explanation);
    const double need = explanation.regime.strict ? explanation.regime.epsilon - tol : -tol;

    VerifyReport rep;
    double prev = 0.0;
    for (std::size_t p = 0; p < order.size(); ++p) {
        std::size_t i = order[p];
        double s = linear_score(explanation.weights, dataset.row(i)) + bonus[i];
        if (p > 0) {
            double gap = prev - s;
            rep.min_gap = std::min(rep.min_gap, gap);
            if (!(gap >= need) && rep.ok) {
                rep.ok = false;
                rep.first_violation = {dataset.id(order[p - 1]), dataset.id(i)};
            }
        }
        prev = s;
    }
    return rep;
}

Dataset normalize_descending_attribute(const Dataset& dataset, std::size_t attr_index) {
    if (attr_index >= dataset.d()) throw ContractError("attribute index out of range");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < dataset.n(); ++i) {
        lo = std::min(lo, dataset.value(i, attr_index));
        hi = std::max(hi, dataset.value(i, attr_index));
    }
    if (!(hi > lo))
        throw DegenerateColumnError("attribute " + dataset.attr_names()[attr_index] + " is constant");
    std::vector<double> col(dataset.n());
    for (std::size_t i = 0; i < dataset.n(); ++i) col[i] = (hi - dataset.value(i, attr_index)) / (hi - lo);
    return dataset.with_column(attr_index, col);
}

std::vector<std::size_t> order_from_weights(const Dataset& dataset, std::span<const double> weights,
                                            TiePolicy tie_policy) {
    for (double w : weights)
        if (!std::isfinite(w)) throw ContractError("non-finite weight");
    auto s = scores(dataset, weights);
    std::vector<std::size_t> idx(dataset.n());
    std::iota(idx.begin(), idx.end(), 0);
    if (tie_policy == TiePolicy::AscendingId) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (s[a] != s[b]) return s[a] > s[b];
            return dataset.id(a) < dataset.id(b);
        });
    } else {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    }
    return idx;
}

Ranking ranking_from_weights(const Dataset& dataset, std::span<const double> weights, TiePolicy tie_policy) {
    Ranking r;
    for (std::size_t i : order_from_weights(dataset, weights, tie_policy)) r.order.push_back(dataset.id(i));
    return r;
}

}  // namespace bonusrank
