#pragma once

#include <optional>
#include <vector>

#include "aruc/lp.hpp"
#include "aruc/mip.hpp"
#include "aruc/model.hpp"

namespace aruc {

// Affine dispatch rule p_i,t(d,r) = u[t][i] + V[t][i]·d_t + Z[t][i]·r_t.
struct LdrPolicy {
    std::vector<std::vector<double>> u;               // [t][i]
    std::vector<std::vector<std::vector<double>>> V;  // [t][i][j]
    std::vector<std::vector<std::vector<double>>> Z;  // [t][i][k]

    double dispatch(int t, int i, const std::vector<double>& d,
                    const std::vector<double>& r) const;
};

struct Commitments {
    std::vector<std::vector<double>> on;  // [i][t], 0/1
    std::vector<std::vector<double>> ru;  // start-up indicator (empty when T == 1)
    std::vector<std::vector<double>> rd;  // shut-down indicator
};

struct AroSolution {
    Commitments commitments;
    LdrPolicy policy;
    double eta = 0.0;        // worst-case dispatch cost
    double objective = 0.0;  // commitment costs + eta
};

// Dual families of the robust counterpart, one slot per period (vectors over
// nodes j or generators k). Absent families (zero budgets) are stored as
// zeros. delta_up/delta_dn are the ramp-row duals of the multiperiod model.
struct DualCertificate {
    double nu = 1.0;
    std::vector<double> mu;                                   // [t]
    std::vector<double> lambda;                               // [t]
    std::vector<std::vector<double>> rho_on, rho_ru, rho_rd;  // [i][t]
    std::vector<std::vector<double>> sigma, zeta;             // [i][t]
    std::vector<std::vector<double>> alpha, theta;            // [t][j]
    std::vector<std::vector<double>> alpha_bar, theta_bar;    // [t][k]
    std::vector<std::vector<std::vector<double>>> beta, gamma;          // [t][i][j]
    std::vector<std::vector<std::vector<double>>> beta_bar, gamma_bar;  // [t][i][k]
    std::vector<std::vector<double>> delta_up, delta_dn;      // [i][t]
    bool approximate = false;  // true for cutting-plane (L2) certificates
};

// Derived norm arguments of the robust rows at a solution.
struct RobustConstraintBundle {
    std::vector<std::vector<double>> omega, tau;            // [t][j]
    std::vector<std::vector<double>> omega_bar, tau_bar;    // [t][k]
    std::vector<std::vector<std::vector<double>>> psi, phi;          // [t][i][j]
    std::vector<std::vector<std::vector<double>>> psi_bar, phi_bar;  // [t][i][k]
};

RobustConstraintBundle compute_bundle(const UCInstance& inst, const AroSolution& sol);

// Column and row handles into the robust-counterpart MILP/LP.
struct PrimalMap {
    std::vector<std::vector<int>> x, ru, rd;  // [i][t]; -1 when absent
    std::vector<std::vector<int>> u;          // [i][t]
    std::vector<std::vector<std::vector<int>>> V, Z;  // [t][i][j/k]; -1 when absent
    int eta = -1;
    int cost_row = -1;
    std::vector<int> balance_row;              // sum-u row per period
    std::vector<int> lambda_row;               // adaptive balance row per period
    std::vector<std::vector<int>> cap_row, floor_row, up_row, dn_row;  // [i][t]
};

// Per-period on-cost used by the objective and the pricing layer
// (commit cost plus no-load cost; start-up cost applies to ru).
double on_cost(const GeneratorSpec& g);

// Linear-decision-rule robust counterpart (paper budgets with L1/Linf sets).
// When `fixed` is provided the binaries become constants and the result is
// the continuous second-phase problem.
MipProblem build_robust_primal(const UCInstance& inst, PrimalMap& map,
                               const Commitments* fixed = nullptr);
MipProblem build_robust_primal(const UCInstance& inst);

// Explicit dual with the named multiplier families. x*/ru*/rd* enter the
// objective and the stationarity rows.
LpProblem build_robust_dual(const UCInstance& inst, const Commitments& fixed);
LpProblem build_robust_dual(const UCInstance& inst, const Commitments& fixed,
                            struct RobustDualMap& map);

// Two-phase solve: MILP, then fix commitments, re-solve the continuous primal
// and the explicit dual, select the lexicographically smallest optimal price
// vector mu, and assemble the certificate. Throws InternalConsistencyError on
// a duality gap beyond 1e-6 relative.
std::pair<AroSolution, DualCertificate> solve_aro(const UCInstance& inst);

// Worst-case residual load/capacity for a solved policy.
RealizationVector worst_case_realization(const AroSolution& sol, const UCInstance& inst);

// Cutting-plane outer approximation for the L2 (ellipsoidal) sets. Each
// Euclidean norm epigraph is refined with supporting hyperplanes until the
// worst constraint violation is below tol. The certificate carries
// approximate vector families and is flagged as such.
std::pair<AroSolution, DualCertificate> ellipsoidal_outer_solve(const UCInstance& inst,
                                                                double tol);

// Fixed commitments implied by an on/off schedule (start-up and shut-down
// indicators derived from transitions and the initial state).
Commitments commitments_from_schedule(const UCInstance& inst,
                                      const std::vector<std::vector<double>>& on);

}  // namespace aruc
