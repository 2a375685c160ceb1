#pragma once

// Test-only oracles, kept independent of the solver paths they audit:
// vertex enumeration for small LPs, exhaustive commitment enumeration for
// small MILPs, and a seeded random-instance generator.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "aruc/lp.hpp"
#include "aruc/mip.hpp"
#include "aruc/model.hpp"

namespace oracle {

struct VertexResult {
    bool feasible = false;
    double objective = 0.0;
};

// Brute-force optimum over all basic solutions of a fully bounded LP:
// every basis subset of the slack-extended system, every nonbasic bound
// assignment. Only sensible for toy sizes.
inline VertexResult enumerate_vertices(const aruc::LpProblem& p) {
    using namespace aruc;
    const int n = p.num_vars();
    const int m = p.num_rows();
    const int total = n + m;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, total);
    Eigen::VectorXd b(m);
    std::vector<double> lb(total), ub(total);
    for (int j = 0; j < n; ++j) {
        lb[j] = p.lower[j];
        ub[j] = p.upper[j];
    }
    for (int r = 0; r < m; ++r) {
        for (auto [j, a] : p.rows[r].coef) A(r, j) += a;
        A(r, n + r) = 1.0;
        b(r) = p.rows[r].rhs;
        switch (p.rows[r].rel) {
            case Rel::Le: lb[n + r] = 0.0; ub[n + r] = aruc::kInf; break;
            case Rel::Ge: lb[n + r] = -aruc::kInf; ub[n + r] = 0.0; break;
            case Rel::Eq: lb[n + r] = 0.0; ub[n + r] = 0.0; break;
        }
    }
    double sgn = p.sense == Sense::Maximize ? -1.0 : 1.0;
    VertexResult best;
    std::vector<int> pick(m);
    std::vector<int> comb;
    comb.reserve(m);
    // Iterate subsets of size m via a simple odometer.
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    auto advance = [&]() {
        int i = m - 1;
        while (i >= 0 && idx[i] == total - m + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int k = i + 1; k < m; ++k) idx[k] = idx[k - 1] + 1;
        return true;
    };
    do {
        Eigen::MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = A.col(idx[i]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        if (!lu.isInvertible()) continue;
        std::vector<int> nonbasic;
        {
            std::vector<bool> inb(total, false);
            for (int i : idx) inb[i] = true;
            for (int j = 0; j < total; ++j)
                if (!inb[j]) nonbasic.push_back(j);
        }
        int nn = static_cast<int>(nonbasic.size());
        for (long mask = 0; mask < (1L << nn); ++mask) {
            Eigen::VectorXd rhs = b;
            bool ok = true;
            std::vector<double> xval(total, 0.0);
            for (int q = 0; q < nn; ++q) {
                int j = nonbasic[q];
                double v = (mask >> q) & 1 ? ub[j] : lb[j];
                if (!std::isfinite(v)) { ok = false; break; }
                xval[j] = v;
                if (v != 0.0) rhs -= A.col(j) * v;
            }
            if (!ok) continue;
            Eigen::VectorXd xb = lu.solve(rhs);
            for (int i = 0; i < m && ok; ++i) {
                int j = idx[i];
                if (xb(i) < lb[j] - 1e-7 || xb(i) > ub[j] + 1e-7) ok = false;
                xval[j] = xb(i);
            }
            if (!ok) continue;
            double obj = p.objective_offset;
            for (int j = 0; j < n; ++j) obj += p.cost[j] * xval[j];
            if (!best.feasible || sgn * obj < sgn * best.objective) {
                best.feasible = true;
                best.objective = obj;
            }
        }
    } while (advance());
    return best;
}

struct EnumMipResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<std::vector<int>> optimal_patterns;  // all tied binary patterns
};

// Exhaustive enumeration over every 0/1 assignment of the binaries.
inline EnumMipResult enumerate_milp(const aruc::MipProblem& p, double tie_tol = 1e-7) {
    using namespace aruc;
    EnumMipResult best;
    int k = static_cast<int>(p.binaries.size());
    for (long mask = 0; mask < (1L << k); ++mask) {
        std::vector<double> lo = p.lp.lower, hi = p.lp.upper;
        std::vector<int> pattern(k);
        for (int i = 0; i < k; ++i) {
            double v = (mask >> i) & 1 ? 1.0 : 0.0;
            pattern[i] = static_cast<int>(v);
            lo[p.binaries[i]] = v;
            hi[p.binaries[i]] = v;
        }
        LpSolution s = solve_lp(p.lp, lo, hi);
        if (s.status != LpStatus::Optimal) continue;
        double sgn = p.lp.sense == Sense::Maximize ? -1.0 : 1.0;
        if (!best.feasible || sgn * s.objective < sgn * best.objective - tie_tol) {
            best.feasible = true;
            best.objective = s.objective;
            best.optimal_patterns = {pattern};
        } else if (std::abs(s.objective - best.objective) <= tie_tol) {
            best.optimal_patterns.push_back(pattern);
        }
    }
    return best;
}

// Random single-period instances for the theorem suites. Deterministic for a
// given seed; instances are rescaled until the robust counterpart is feasible.
inline aruc::UCInstance random_instance(std::uint64_t seed) {
    using namespace aruc;
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    UCInstance inst;
    inst.periods = 1;
    int gens = std::uniform_int_distribution<int>(3, 8)(rng);
    int nodes = std::uniform_int_distribution<int>(2, 5)(rng);
    for (int i = 0; i < gens; ++i) {
        GeneratorSpec g;
        g.id = "g" + std::to_string(i + 1);
        g.commit_cost = std::round(uni(5.0, 60.0) * 4.0) / 4.0;
        g.energy_cost = std::round(uni(1.0, 6.0) * 4.0) / 4.0;
        g.cap_max = std::round(uni(5.0, 25.0) * 4.0) / 4.0;
        inst.generators.push_back(g);
    }
    double total_cap = 0.0;
    for (const auto& g : inst.generators) total_cap += g.cap_max;
    double total_load = 0.0;
    for (int jx = 0; jx < nodes; ++jx) {
        DemandNode n;
        n.id = "d" + std::to_string(jx + 1);
        n.expected_load = {std::round(uni(2.0, 12.0) * 4.0) / 4.0};
        total_load += n.expected_load[0];
        inst.demand_nodes.push_back(n);
    }
    inst.uncertainty.norm_order = (seed % 2 == 0) ? NormOrder::One : NormOrder::Inf;
    double gamma = std::round(uni(0.0, 0.35 * total_load) * 4.0) / 4.0;
    double delta = (seed % 4 < 2) ? 0.0 : std::round(uni(0.05, 0.2 * 5.0) * 4.0) / 4.0;
    inst.uncertainty.gamma_q = {gamma};
    inst.uncertainty.delta_p = {delta};
    // Worst-case extra load the sets can realize, plus one unit of slack for
    // the adaptive share every committed generator must be able to carry.
    double worst_extra =
        inst.uncertainty.norm_order == NormOrder::One ? gamma : gamma * nodes;
    double need = total_load + worst_extra + gens * delta + std::max(2.0, 0.1 * total_load);
    if (total_cap < need) {
        double scale = need / total_cap;
        for (auto& g : inst.generators)
            g.cap_max = std::round(g.cap_max * scale * 4.0) / 4.0 + 0.25;
    }
    inst.validate();
    return inst;
}

}  // namespace oracle
