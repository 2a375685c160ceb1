#pragma once

#include <vector>

#include "aruc/lp.hpp"

namespace aruc {

enum class MipStatus { Optimal, Infeasible };

struct MipProblem {
    LpProblem lp;
    std::vector<int> binaries;  // indices of 0/1 variables

    void validate() const;  // binary indices in range, bounded to [0,1]
};

struct MipSolution {
    MipStatus status = MipStatus::Optimal;
    std::vector<double> x;
    double objective = 0.0;
    long nodes = 0;
};

// Plain branch and bound: most-fractional branching (lowest index on ties),
// best-bound node selection, no cuts. Node limit 10^6.
MipSolution solve_milp(const MipProblem& p);

}  // namespace aruc
