#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace aruc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Rel { Le, Eq, Ge };
enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

// Dense-ish LP in row form with per-variable bounds. Rows keep sparse
// coefficient lists; problems at this scale never need more.
struct LpProblem {
    struct Row {
        std::vector<std::pair<int, double>> coef;
        Rel rel = Rel::Le;
        double rhs = 0.0;
    };

    Sense sense = Sense::Minimize;
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;
    double objective_offset = 0.0;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_var(double lb, double ub, double c = 0.0);
    int add_row(Rel rel, double rhs, std::vector<std::pair<int, double>> coef = {});
    void add_coef(int row, int var, double value);

    void validate() const;  // throws DimensionError
};

// Row duals follow the sensitivity convention: y_r = d(objective)/d(rhs_r).
// For a minimization problem this means y <= 0 on Le rows, y >= 0 on Ge rows,
// free on Eq rows, and reduced costs d = c - A'y with d >= 0 at lower bounds
// and d <= 0 at upper bounds (signs flip for maximization).
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> row_dual;
    std::vector<double> reduced_cost;
    // Farkas certificate (per-row multipliers) when infeasible; primal ray
    // over the variables when unbounded.
    std::vector<double> farkas_ray;
    std::vector<double> unbounded_ray;
    long iterations = 0;
};

// Bounded-variable revised simplex. Bland's rule engages after 1000
// degenerate pivots; the pivot budget is 100*(rows+cols).
LpSolution solve_lp(const LpProblem& p);

// Same, with bound overrides (used by branch and bound to avoid copying rows).
LpSolution solve_lp(const LpProblem& p, const std::vector<double>& lower,
                    const std::vector<double>& upper);

struct SlacknessItem {
    bool is_row = false;
    int index = 0;
    double violation = 0.0;
};

struct SlacknessReport {
    double max_violation = 0.0;
    std::vector<SlacknessItem> items;
    bool pass = false;  // max violation <= 1e-6
};

// Audits |dual_r * slack_r| per row and |reduced_cost_j * (x_j - bound)| per
// variable for an optimal solution.
SlacknessReport check_complementary_slackness(const LpProblem& p, const LpSolution& s);

// Explicit dual of a minimization LP: variables are the row duals followed by
// bound multipliers for finite lower/upper bounds. Used as an independent
// oracle and by dual-selection resolves.
struct DualVarMap {
    std::vector<int> row_dual;  // per primal row
    std::vector<int> at_lower;  // per primal var, -1 when bound infinite
    std::vector<int> at_upper;
};

LpProblem dual_problem(const LpProblem& p, DualVarMap* map = nullptr);

struct WarmImpl;

// Re-solves one LP under changing variable bounds, keeping the basis between
// calls; bound changes leave the old basis dual feasible, so a dual-simplex
// repair is usually a handful of pivots. Falls back to a cold solve whenever
// the warm start cannot be used. The problem must outlive the solver.
class LpWarmSolver {
public:
    explicit LpWarmSolver(const LpProblem& p);
    ~LpWarmSolver();
    LpSolution solve(const std::vector<double>& lower, const std::vector<double>& upper);

private:
    const LpProblem& p_;
    std::unique_ptr<WarmImpl> impl_;
};

}  // namespace aruc
