#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace bonusrank {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kInteriorMargin = 1e-7;

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };

struct LpRow {
    std::vector<double> coeffs;  // dense, one entry per variable
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

// Variables default to [0, +inf).
struct LinearProgram {
    std::size_t num_vars = 0;
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> lower, upper;

    explicit LinearProgram(std::size_t n = 0);
    std::size_t add_row(std::vector<double> coeffs, Relation rel, double rhs);
    void set_bounds(std::size_t j, double lo, double hi);
};

struct SparseRow {
    std::vector<std::pair<std::size_t, double>> terms;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

// Same problem with sparse rows; what the MILP layer builds.
struct SparseLinearProgram {
    std::size_t num_vars = 0;
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<SparseRow> rows;
    std::vector<double> lower, upper;

    explicit SparseLinearProgram(std::size_t n = 0);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Stalled };

const char* to_string(LpStatus s);

struct LpOptions {
    std::size_t max_iterations = 0;  // 0: derived from problem size
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    double check_tol = 1e-8;
    bool presolve = true;
    std::size_t degenerate_switch = 50;  // consecutive degenerate pivots before Bland's rule
};

struct LpResult {
    LpStatus status = LpStatus::Stalled;
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    double max_violation = 0.0;
};

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opt = {});
LpResult solve_lp(const SparseLinearProgram& lp, const LpOptions& opt = {});

// Largest violation of any row or bound at x.
double lp_violation(const SparseLinearProgram& lp, const std::vector<double>& x);

// Per-coordinate sign restriction for weight vectors.
struct Cone {
    std::vector<bool> positive;  // true: coordinate must be > 0; false: free

    static Cone positive_orthant(std::size_t d) { return {std::vector<bool>(d, true)}; }
    static Cone full(std::size_t d) { return {std::vector<bool>(d, false)}; }
    std::size_t dim() const { return positive.size(); }
};

enum class WitnessStatus { Found, Infeasible, Stalled };

struct WitnessResult {
    WitnessStatus status = WitnessStatus::Infeasible;
    std::vector<double> w;  // unit 1-norm
    double margin = 0.0;    // min over halfspaces (and positive coordinates) at w
};

// max s  s.t.  n_h . w >= s for all h, w_j >= s on positive coordinates, sum |w| <= norm_cap.
// Found iff the optimal s exceeds kInteriorMargin.
WitnessResult interior_witness(const std::vector<std::vector<double>>& normals, const Cone& cone,
                               double norm_cap = 1.0);

}  // namespace bonusrank
