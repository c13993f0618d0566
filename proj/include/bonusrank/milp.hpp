#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bonusrank/core.hpp"
#include "bonusrank/ermb.hpp"
#include "bonusrank/lpsolve.hpp"

namespace bonusrank {

inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr double kDefaultVmax = 100.0;
inline constexpr double kWeightBox = 1e6;
inline constexpr double kMilpTol = 1e-6;

struct MilpVar {
    std::string name;
    double lo = 0.0, hi = kInf;
    bool integer = false;

    bool operator==(const MilpVar&) const = default;
};

// Terms are kept sorted by variable index with no zero coefficients.
struct MilpConstraint {
    std::string name;
    std::vector<std::pair<std::size_t, double>> terms;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;

    bool operator==(const MilpConstraint&) const = default;
};

struct MilpMeta {
    std::string encoding;  // "base", "refined" or empty for hand-built models
    std::size_t n = 0, d = 0, g = 0, k = 0;
    double epsilon = 0.0;
    double big_m = 0.0;       // v upper bound used in the linearization
    double weight_box = 0.0;  // base only
    std::vector<std::string> pi;  // ids in ranking order; d_i_r refers to pi[i-1]

    bool operator==(const MilpMeta&) const = default;
};

class MilpModel {
public:
    std::vector<MilpVar> vars;
    std::vector<MilpConstraint> cons;
    std::vector<std::pair<std::size_t, double>> objective;
    Sense sense = Sense::Minimize;
    MilpMeta meta;

    std::size_t add_var(std::string name, double lo, double hi, bool integer = false);
    std::size_t add_constraint(std::string name, std::vector<std::pair<std::size_t, double>> terms, Relation rel,
                               double rhs);
    std::optional<std::size_t> find_var(const std::string& name) const;
    std::size_t var(const std::string& name) const;  // ContractError when absent
    std::optional<std::size_t> find_constraint(const std::string& name) const;
    std::size_t num_integer() const;

    // Largest violation of a row, bound or integrality at x.
    double violation(const std::vector<double>& x) const;

    bool operator==(const MilpModel& o) const {
        return vars == o.vars && cons == o.cons && objective == o.objective && sense == o.sense && meta == o.meta;
    }

private:
    std::unordered_map<std::string, std::size_t> var_index_, con_index_;
};

std::string w_name(std::size_t j);
std::string v_name(std::size_t r);
std::string delta_name(std::size_t i, std::size_t r);
std::string z_name(std::size_t i, std::size_t r);
std::string sign_name(std::size_t j);

MilpModel encode_base(const Dataset& dataset, const Ranking& pi, std::size_t g, std::size_t k, double big_m,
                      double weight_box = kWeightBox);

MilpModel encode_refined(const Dataset& dataset, const Ranking& pi, std::size_t g, std::size_t k,
                         double epsilon = kDefaultEpsilon, double v_max = kDefaultVmax,
                         const std::set<std::string>& forced = {});

struct MilpLimits {
    double time_limit = 0.0;     // seconds, 0: none
    std::size_t node_limit = 0;  // 0: none
    bool root_heuristic = true;  // refined encodings only
};

struct MilpSolution {
    SolveStatus status = SolveStatus::Limit;
    std::vector<double> values;  // by variable index, empty unless Feasible
    std::size_t node_count = 0;
    double wall_time = 0.0;
    std::size_t open_nodes = 0;  // frontier left when a limit hit
    bool from_heuristic = false;

    double value(const MilpModel& m, const std::string& name) const { return values.at(m.var(name)); }
};

MilpSolution solve_bnb(const MilpModel& model, const MilpLimits& limits = {});

// LP with every integer variable fixed to `fixed` (rounded); checks the rest of the model.
// Returns the full assignment when feasible.
std::optional<std::vector<double>> solve_fixed(const MilpModel& model, const std::vector<double>& fixed);

// Relaxation of the model as a sparse LP, with optional per-variable bound overrides.
SparseLinearProgram relaxation(const MilpModel& model, const std::vector<double>* lo = nullptr,
                               const std::vector<double>* hi = nullptr);

Explanation decode(const MilpModel& model, const MilpSolution& solution, const Dataset& dataset);

// Structure-aware primal heuristic for one-group refined encodings: alternates an
// elastic LP in (w, v) with an exact DP over the boosted set. Returns a verified
// assignment or nothing.
std::optional<std::vector<double>> refined_heuristic(const MilpModel& model, double time_limit = 0.0);

enum class ModelFormat { Lp, Mps };

std::string export_model(const MilpModel& model, ModelFormat format);
MilpModel parse_model(const std::string& text, ModelFormat format);

}  // namespace bonusrank
