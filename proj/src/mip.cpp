#include "aruc/mip.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "aruc/errors.hpp"

namespace aruc {

namespace {

constexpr double kIntTol = 1e-6;
constexpr long kNodeLimit = 1000000;

struct Node {
    std::vector<double> lower, upper;
    double bound;  // parent LP relaxation value
    long tick;     // insertion order, breaks bound ties deterministically
};

struct NodeOrder {
    bool minimize;
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return minimize ? a.bound > b.bound : a.bound < b.bound;
        return a.tick > b.tick;
    }
};

}  // namespace

void MipProblem::validate() const {
    lp.validate();
    for (int j : binaries) {
        if (j < 0 || j >= lp.num_vars())
            throw DimensionError("binary index " + std::to_string(j) + " out of range");
        if (lp.lower[j] < -kIntTol || lp.upper[j] > 1.0 + kIntTol)
            throw DimensionError("binary variable " + std::to_string(j) +
                                 " must be bounded within [0,1]");
    }
}

MipSolution solve_milp(const MipProblem& p) {
    p.validate();
    const bool minimize = p.lp.sense == Sense::Minimize;
    MipSolution sol;
    sol.status = MipStatus::Infeasible;
    sol.objective = minimize ? kInf : -kInf;
    auto better = [&](double a, double b) { return minimize ? a < b : a > b; };

    LpWarmSolver solver(p.lp);
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open(NodeOrder{minimize});
    long tick = 0;
    open.push({p.lp.lower, p.lp.upper, minimize ? -kInf : kInf, tick++});

    while (!open.empty()) {
        if (sol.nodes >= kNodeLimit)
            throw ResourceLimitError("branch-and-bound node limit exceeded");
        Node node = open.top();
        open.pop();
        if (sol.status == MipStatus::Optimal &&
            !better(node.bound, sol.objective - (minimize ? 1e-9 : -1e-9)))
            continue;
        ++sol.nodes;
        LpSolution relax = solver.solve(node.lower, node.upper);
        if (relax.status == LpStatus::Infeasible) continue;
        if (relax.status == LpStatus::Unbounded)
            throw InternalConsistencyError("unbounded LP relaxation in branch and bound");
        double gap_eps = 1e-9 * (1.0 + std::abs(sol.objective));
        if (sol.status == MipStatus::Optimal &&
            !better(relax.objective, minimize ? sol.objective - gap_eps : sol.objective + gap_eps))
            continue;

        // Most-fractional binary, lowest index on ties.
        int branch = -1;
        double best_frac = kIntTol;
        for (int j : p.binaries) {
            double f = relax.x[j] - std::floor(relax.x[j]);
            double dist = std::min(f, 1.0 - f);
            if (dist > best_frac + 1e-12) {
                best_frac = dist;
                branch = j;
            }
        }
        if (branch < 0) {
            // Integral incumbent.
            if (sol.status != MipStatus::Optimal || better(relax.objective, sol.objective)) {
                sol.status = MipStatus::Optimal;
                sol.objective = relax.objective;
                sol.x = relax.x;
                for (int j : p.binaries) sol.x[j] = std::round(sol.x[j]);
            }
            continue;
        }
        Node down = node;
        down.upper[branch] = 0.0;
        down.bound = relax.objective;
        down.tick = tick++;
        Node up = node;
        up.lower[branch] = 1.0;
        up.bound = relax.objective;
        up.tick = tick++;
        open.push(std::move(down));
        open.push(std::move(up));
    }
    return sol;
}

}  // namespace aruc
