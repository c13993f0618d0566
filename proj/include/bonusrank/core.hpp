#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bonusrank/errors.hpp"

namespace bonusrank {

inline constexpr double kVerifyTol = 1e-9;

// n tuples of d finite attributes, row-major.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> ids, const std::vector<std::vector<double>>& rows,
            std::vector<std::string> attr_names = {},
            std::optional<std::vector<std::string>> planted = std::nullopt);
    Dataset(std::vector<std::string> ids, std::vector<double> flat_values, std::size_t d,
            std::vector<std::string> attr_names = {},
            std::optional<std::vector<std::string>> planted = std::nullopt);

    std::size_t n() const { return ids_.size(); }
    std::size_t d() const { return d_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& attr_names() const { return attr_names_; }
    const std::optional<std::vector<std::string>>& planted() const { return planted_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
    double value(std::size_t i, std::size_t j) const { return values_[i * d_ + j]; }
    const std::vector<double>& flat() const { return values_; }

    std::optional<std::size_t> find(const std::string& id) const;
    std::size_t index(const std::string& id) const;  // throws ContractError when absent

    Dataset with_column(std::size_t j, const std::vector<double>& column) const;
    Dataset subset(const std::vector<std::size_t>& rows) const;

private:
    void validate();

    std::vector<std::string> ids_;
    std::vector<std::string> attr_names_;
    std::vector<double> values_;
    std::size_t d_ = 0;
    std::optional<std::vector<std::string>> planted_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Ranking {
    std::vector<std::string> order;  // position 0 is best

    std::size_t size() const { return order.size(); }
    bool operator==(const Ranking&) const = default;
};

struct Group {
    std::vector<std::string> members;
    double bonus = 0.0;

    bool operator==(const Group&) const = default;
};

struct Regime {
    bool strict = false;
    double epsilon = 0.0;

    static Regime non_strict() { return {}; }
    static Regime strict_eps(double eps);
    bool operator==(const Regime&) const = default;
};

struct Provenance {
    std::string solver;
    std::vector<std::pair<std::string, std::string>> params;

    bool operator==(const Provenance&) const = default;
};

struct Explanation {
    std::vector<double> weights;
    std::vector<Group> groups;
    Regime regime;
    Provenance provenance;

    std::size_t bonus_count() const;
    bool operator==(const Explanation&) const = default;
};

enum class Variant { Singleton, Multigroup };

struct ProblemSpec {
    Variant variant = Variant::Singleton;
    std::size_t g = 1;
    std::size_t k = 0;
    Regime regime;

    void validate() const;
};

struct VerifyReport {
    bool ok = true;
    double min_gap = std::numeric_limits<double>::infinity();
    std::optional<std::pair<std::string, std::string>> first_violation;
};

enum class TiePolicy { AscendingId, DatasetOrder };

double linear_score(std::span<const double> weights, std::span<const double> tuple_values);

// Throws InvariantError if id is in more than one group.
double bonus_score(const Explanation& explanation, const std::string& id,
                   std::span<const double> tuple_values);

// Per-tuple bonus lookup (0 for tuples outside every group); validates disjointness
// and that every member exists in the dataset.
std::vector<double> bonus_vector(const Dataset& dataset, const Explanation& explanation);

VerifyReport verify_realization(const Dataset& dataset, const Ranking& ranking,
                                const Explanation& explanation, double tol = kVerifyTol);

Dataset normalize_descending_attribute(const Dataset& dataset, std::size_t attr_index);

Ranking ranking_from_weights(const Dataset& dataset, std::span<const double> weights,
                             TiePolicy tie_policy = TiePolicy::AscendingId);

// Same as ranking_from_weights but returns row indices.
std::vector<std::size_t> order_from_weights(const Dataset& dataset, std::span<const double> weights,
                                            TiePolicy tie_policy = TiePolicy::AscendingId);

// Row index of every ranking entry; ContractError unless ranking is a permutation of ids.
std::vector<std::size_t> ranking_indices(const Dataset& dataset, const Ranking& ranking);

// pos[row] = position of that row in the ranking.
std::vector<std::size_t> positions_of(const std::vector<std::size_t>& order);

std::vector<double> scores(const Dataset& dataset, std::span<const double> weights);

}  // namespace bonusrank
