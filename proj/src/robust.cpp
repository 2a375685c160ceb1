#include "aruc/robust.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>

#include "aruc/errors.hpp"
#include "aruc/norms.hpp"

namespace aruc {

namespace {

struct Lin {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;
    // Absent columns (generators fixed off) contribute nothing.
    void add(int col, double c) {
        if (col >= 0 && c != 0.0) terms.emplace_back(col, c);
    }
};

// Euclidean-norm epigraph bookkeeping for the cutting-plane path. A block is
// one ||w||_2 <= t bound: its epigraph column, argument expressions, and the
// supporting planes added so far.
struct NormBlock {
    int epi = -1;
    std::vector<Lin> comps;
    std::vector<int> cut_rows;
    std::vector<std::vector<double>> cut_normals;
};

struct CutRegistry {
    std::vector<NormBlock> blocks;
};

// Appends rows enforcing value >= dual-norm of comps and returns the value as
// a linear expression. For L2 the epigraph starts from axis cuts and the
// block is registered for refinement.
Lin add_norm_epigraph(LpProblem& lp, NormOrder ell, const std::vector<Lin>& comps,
                      CutRegistry* cuts) {
    Lin value;
    if (comps.empty()) return value;
    auto add_abs_rows = [&lp](const Lin& w, int bound_var) {
        LpProblem::Row r1, r2;
        r1.rel = r2.rel = Rel::Le;
        r1.rhs = -w.constant;
        r2.rhs = w.constant;
        for (auto [c, a] : w.terms) {
            r1.coef.emplace_back(c, a);
            r2.coef.emplace_back(c, -a);
        }
        r1.coef.emplace_back(bound_var, -1.0);
        r2.coef.emplace_back(bound_var, -1.0);
        lp.rows.push_back(std::move(r1));
        lp.rows.push_back(std::move(r2));
    };
    switch (ell) {
        case NormOrder::One: {  // dual norm is Linf: one shared bound
            int n = lp.add_var(0.0, kInf, 0.0);
            for (const auto& w : comps) add_abs_rows(w, n);
            value.add(n, 1.0);
            break;
        }
        case NormOrder::Inf: {  // dual norm is L1: nonnegative splits
            for (const auto& w : comps) {
                int plus = lp.add_var(0.0, kInf, 0.0);
                int minus = lp.add_var(0.0, kInf, 0.0);
                LpProblem::Row tie;
                tie.rel = Rel::Eq;
                tie.rhs = -w.constant;
                for (auto [c, a] : w.terms) tie.coef.emplace_back(c, a);
                tie.coef.emplace_back(plus, -1.0);
                tie.coef.emplace_back(minus, 1.0);
                lp.rows.push_back(std::move(tie));
                value.add(plus, 1.0);
                value.add(minus, 1.0);
            }
            break;
        }
        case NormOrder::Two: {
            if (!cuts)
                throw UnsupportedError("L2 uncertainty sets require ellipsoidal_outer_solve");
            int n = lp.add_var(0.0, kInf, 0.0);
            NormBlock block;
            block.epi = n;
            block.comps = comps;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                int first = lp.num_rows();
                add_abs_rows(comps[c], n);
                std::vector<double> gp(comps.size(), 0.0), gm(comps.size(), 0.0);
                gp[c] = 1.0;
                gm[c] = -1.0;
                block.cut_rows.push_back(first);
                block.cut_normals.push_back(gp);
                block.cut_rows.push_back(first + 1);
                block.cut_normals.push_back(gm);
            }
            cuts->blocks.push_back(std::move(block));
            value.add(n, 1.0);
            break;
        }
    }
    return value;
}

int add_le_row(LpProblem& lp, const std::vector<Lin>& pieces, const std::vector<double>& weights,
               double rhs) {
    LpProblem::Row row;
    row.rel = Rel::Le;
    row.rhs = rhs;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        for (auto [c, a] : pieces[p].terms) row.coef.emplace_back(c, weights[p] * a);
        row.rhs -= weights[p] * pieces[p].constant;
    }
    lp.rows.push_back(std::move(row));
    return lp.num_rows() - 1;
}

bool ramp_row_exists(const GeneratorSpec& g, int T) { return T > 1 && g.ramp_limited(); }

}  // namespace

double on_cost(const GeneratorSpec& g) { return g.commit_cost + g.no_load_cost; }

double LdrPolicy::dispatch(int t, int i, const std::vector<double>& d,
                           const std::vector<double>& r) const {
    double p = u[t][i];
    for (std::size_t j = 0; j < d.size(); ++j) p += V[t][i][j] * d[j];
    for (std::size_t k = 0; k < r.size(); ++k) p += Z[t][i][k] * r[k];
    return p;
}

Commitments commitments_from_schedule(const UCInstance& inst,
                                      const std::vector<std::vector<double>>& on) {
    Commitments c;
    int I = inst.num_generators(), T = inst.periods;
    c.on = on;
    c.ru.assign(I, std::vector<double>(T, 0.0));
    c.rd.assign(I, std::vector<double>(T, 0.0));
    // Start-up/shut-down indicators only exist in the multiperiod model.
    if (T > 1) {
        for (int i = 0; i < I; ++i) {
            double prev = inst.generators[i].initial_on ? 1.0 : 0.0;
            for (int t = 0; t < T; ++t) {
                double d = on[i][t] - prev;
                c.ru[i][t] = std::max(d, 0.0);
                c.rd[i][t] = std::max(-d, 0.0);
                prev = on[i][t];
            }
        }
    }
    return c;
}

namespace {

// Shared construction of the robust counterpart. With `fixed` the binaries
// are pinned by bounds, which turns the MILP into the second-phase LP while
// keeping the column layout and objective identical.
MipProblem build_primal_impl(const UCInstance& inst, PrimalMap& map, const Commitments* fixed,
                             CutRegistry* cuts) {
    inst.validate();
    const int I = inst.num_generators();
    const int J = inst.num_nodes();
    const int T = inst.periods;
    const NormOrder ell = inst.uncertainty.load_set_order();
    const NormOrder cap_ell = inst.uncertainty.capacity_set_order();
    const auto& gam = inst.uncertainty.gamma_q;
    const auto& del = inst.uncertainty.delta_p;

    MipProblem mp;
    LpProblem& lp = mp.lp;
    map = PrimalMap{};
    map.x.assign(I, std::vector<int>(T, -1));
    map.ru.assign(I, std::vector<int>(T, -1));
    map.rd.assign(I, std::vector<int>(T, -1));
    map.u.assign(I, std::vector<int>(T, -1));
    map.V.assign(T, std::vector<std::vector<int>>(I, std::vector<int>(J, -1)));
    map.Z.assign(T, std::vector<std::vector<int>>(I, std::vector<int>(I, -1)));
    map.balance_row.assign(T, -1);
    map.lambda_row.assign(T, -1);
    map.cap_row.assign(I, std::vector<int>(T, -1));
    map.floor_row.assign(I, std::vector<int>(T, -1));
    map.up_row.assign(I, std::vector<int>(T, -1));
    map.dn_row.assign(I, std::vector<int>(T, -1));

    for (int i = 0; i < I; ++i) {
        const auto& g = inst.generators[i];
        for (int t = 0; t < T; ++t) {
            double lo = 0.0, hi = 1.0;
            if (fixed) lo = hi = fixed->on[i][t];
            map.x[i][t] = lp.add_var(lo, hi, on_cost(g));
            if (!fixed) mp.binaries.push_back(map.x[i][t]);
        }
    }
    if (T > 1) {
        for (int i = 0; i < I; ++i) {
            const auto& g = inst.generators[i];
            for (int t = 0; t < T; ++t) {
                double lo = 0.0, hi = 1.0;
                if (fixed) lo = hi = fixed->ru[i][t];
                map.ru[i][t] = lp.add_var(lo, hi, g.startup_cost);
                lo = 0.0;
                hi = 1.0;
                if (fixed) lo = hi = fixed->rd[i][t];
                map.rd[i][t] = lp.add_var(lo, hi, 0.0);
            }
        }
    }
    auto off = [&](int i, int t) { return fixed && fixed->on[i][t] == 0.0; };
    auto off_all = [&](int i) {
        if (!fixed) return false;
        for (int t = 0; t < T; ++t)
            if (fixed->on[i][t] != 0.0) return false;
        return true;
    };
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t)
            map.u[i][t] = off(i, t) ? lp.add_var(0.0, 0.0, 0.0) : lp.add_var(-kInf, kInf, 0.0);
    for (int t = 0; t < T; ++t) {
        if (gam[t] > 0.0)
            for (int i = 0; i < I; ++i) {
                if (off(i, t)) continue;
                for (int j = 0; j < J; ++j) map.V[t][i][j] = lp.add_var(-kInf, kInf, 0.0);
            }
        if (del[t] > 0.0)
            for (int i = 0; i < I; ++i) {
                if (off(i, t)) continue;
                for (int k = 0; k < I; ++k) map.Z[t][i][k] = lp.add_var(-kInf, kInf, 0.0);
            }
    }
    map.eta = lp.add_var(-kInf, kInf, 1.0);

    // Shared norm bounds per (i,t): ||V_i||, ||Z_i||, ||x e_i - Z_i||.
    std::vector<std::vector<Lin>> nV(T, std::vector<Lin>(I)), nZ(T, std::vector<Lin>(I)),
        nPsiBar(T, std::vector<Lin>(I));
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < I; ++i) {
            if (off(i, t)) continue;
            if (gam[t] > 0.0) {
                std::vector<Lin> comps(J);
                for (int j = 0; j < J; ++j) comps[j].add(map.V[t][i][j], 1.0);
                nV[t][i] = add_norm_epigraph(lp, ell, comps, cuts);
            }
            if (del[t] > 0.0) {
                std::vector<Lin> zc(I);
                for (int k = 0; k < I; ++k) zc[k].add(map.Z[t][i][k], 1.0);
                nZ[t][i] = add_norm_epigraph(lp, cap_ell, zc, cuts);
                std::vector<Lin> psb(I);
                for (int k = 0; k < I; ++k) {
                    if (k == i) psb[k].add(map.x[i][t], 1.0);
                    psb[k].add(map.Z[t][i][k], -1.0);
                }
                nPsiBar[t][i] = add_norm_epigraph(lp, cap_ell, psb, cuts);
            }
        }

    // Worst-case cost row: sum C u + sum_t (gamma_t ||omega_t|| + delta_t ||omega_bar_t||) <= eta.
    {
        std::vector<Lin> pieces;
        std::vector<double> w;
        Lin cu;
        for (int i = 0; i < I; ++i)
            for (int t = 0; t < T; ++t) cu.add(map.u[i][t], inst.generators[i].energy_cost);
        cu.add(map.eta, -1.0);
        pieces.push_back(cu);
        w.push_back(1.0);
        for (int t = 0; t < T; ++t) {
            if (gam[t] > 0.0) {
                std::vector<Lin> om(J);
                for (int j = 0; j < J; ++j)
                    for (int i = 0; i < I; ++i)
                        om[j].add(map.V[t][i][j], inst.generators[i].energy_cost);
                pieces.push_back(add_norm_epigraph(lp, ell, om, cuts));
                w.push_back(gam[t]);
            }
            if (del[t] > 0.0) {
                std::vector<Lin> omb(I);
                for (int k = 0; k < I; ++k)
                    for (int i = 0; i < I; ++i)
                        omb[k].add(map.Z[t][i][k], inst.generators[i].energy_cost);
                pieces.push_back(add_norm_epigraph(lp, cap_ell, omb, cuts));
                w.push_back(del[t]);
            }
        }
        map.cost_row = add_le_row(lp, pieces, w, 0.0);
    }

    // Per period: the adaptive balance row (forces V column sums to one and Z
    // column sums to zero whenever the budgets are positive) and the
    // expected-load balance.
    for (int t = 0; t < T; ++t) {
        std::vector<Lin> pieces;
        std::vector<double> w;
        if (gam[t] > 0.0) {
            std::vector<Lin> tau(J);
            for (int j = 0; j < J; ++j) {
                tau[j].constant = 1.0;
                for (int i = 0; i < I; ++i) tau[j].add(map.V[t][i][j], -1.0);
            }
            pieces.push_back(add_norm_epigraph(lp, ell, tau, cuts));
            w.push_back(gam[t]);
        }
        if (del[t] > 0.0) {
            std::vector<Lin> tb(I);
            for (int k = 0; k < I; ++k)
                for (int i = 0; i < I; ++i) tb[k].add(map.Z[t][i][k], -1.0);
            pieces.push_back(add_norm_epigraph(lp, cap_ell, tb, cuts));
            w.push_back(del[t]);
        }
        if (!pieces.empty()) map.lambda_row[t] = add_le_row(lp, pieces, w, 0.0);

        LpProblem::Row bal;
        bal.rel = Rel::Eq;
        bal.rhs = inst.total_load(t);
        for (int i = 0; i < I; ++i) bal.coef.emplace_back(map.u[i][t], 1.0);
        lp.rows.push_back(std::move(bal));
        map.balance_row[t] = lp.num_rows() - 1;
    }

    // Capacity and minimum-output rows.
    for (int i = 0; i < I; ++i) {
        const auto& g = inst.generators[i];
        for (int t = 0; t < T; ++t) {
            if (off(i, t)) continue;
            {
                Lin linear;
                linear.add(map.u[i][t], 1.0);
                linear.add(map.x[i][t], -g.cap_max);
                std::vector<Lin> pieces{linear};
                std::vector<double> w{1.0};
                if (gam[t] > 0.0) {
                    pieces.push_back(nV[t][i]);
                    w.push_back(gam[t]);
                }
                if (del[t] > 0.0) {
                    pieces.push_back(nPsiBar[t][i]);
                    w.push_back(del[t]);
                }
                map.cap_row[i][t] = add_le_row(lp, pieces, w, 0.0);
            }
            {
                Lin linear;
                linear.add(map.u[i][t], -1.0);
                linear.add(map.x[i][t], g.cap_min);
                std::vector<Lin> pieces{linear};
                std::vector<double> w{1.0};
                if (gam[t] > 0.0) {
                    pieces.push_back(nV[t][i]);
                    w.push_back(gam[t]);
                }
                if (del[t] > 0.0) {
                    pieces.push_back(nZ[t][i]);
                    w.push_back(del[t]);
                }
                map.floor_row[i][t] = add_le_row(lp, pieces, w, 0.0);
            }
        }
    }

    // Robust ramp rows, constraint-wise over the adjacent periods' sets. An
    // unlimited ramp rate drops the whole family for that generator. The
    // shut-down family starts at the second period; the start-up family
    // covers the first with the initial state on the right-hand side.
    for (int i = 0; i < I; ++i) {
        const auto& g = inst.generators[i];
        if (!ramp_row_exists(g, T) || off_all(i)) continue;
        for (int t = 0; t < T; ++t) {
            {
                Lin linear;
                linear.add(map.u[i][t], 1.0);
                linear.add(map.ru[i][t], -g.startup_rate);
                double rhs = 0.0;
                if (t == 0) {
                    rhs = g.initial_dispatch + g.ramp_rate * (g.initial_on ? 1.0 : 0.0);
                } else {
                    linear.add(map.u[i][t - 1], -1.0);
                    linear.add(map.x[i][t - 1], -g.ramp_rate);
                }
                std::vector<Lin> pieces{linear};
                std::vector<double> w{1.0};
                if (gam[t] > 0.0) {
                    pieces.push_back(nV[t][i]);
                    w.push_back(gam[t]);
                }
                if (del[t] > 0.0) {
                    pieces.push_back(nZ[t][i]);
                    w.push_back(del[t]);
                }
                if (t > 0 && gam[t - 1] > 0.0) {
                    pieces.push_back(nV[t - 1][i]);
                    w.push_back(gam[t - 1]);
                }
                if (t > 0 && del[t - 1] > 0.0) {
                    pieces.push_back(nZ[t - 1][i]);
                    w.push_back(del[t - 1]);
                }
                map.up_row[i][t] = add_le_row(lp, pieces, w, rhs);
            }
            if (t > 0) {
                Lin linear;
                linear.add(map.u[i][t - 1], 1.0);
                linear.add(map.u[i][t], -1.0);
                linear.add(map.x[i][t], -g.ramp_rate);
                linear.add(map.rd[i][t], -g.shutdown_rate);
                std::vector<Lin> pieces{linear};
                std::vector<double> w{1.0};
                if (gam[t] > 0.0) {
                    pieces.push_back(nV[t][i]);
                    w.push_back(gam[t]);
                }
                if (del[t] > 0.0) {
                    pieces.push_back(nZ[t][i]);
                    w.push_back(del[t]);
                }
                if (gam[t - 1] > 0.0) {
                    pieces.push_back(nV[t - 1][i]);
                    w.push_back(gam[t - 1]);
                }
                if (del[t - 1] > 0.0) {
                    pieces.push_back(nZ[t - 1][i]);
                    w.push_back(del[t - 1]);
                }
                map.dn_row[i][t] = add_le_row(lp, pieces, w, 0.0);
            }
        }
    }

    // Commitment logic (multiperiod, binaries only; redundant at fixed
    // commitments, which satisfy it by construction).
    if (T > 1 && !fixed) {
        for (int i = 0; i < I; ++i) {
            const auto& g = inst.generators[i];
            double prev_on = g.initial_on ? 1.0 : 0.0;
            for (int t = 0; t < T; ++t) {
                LpProblem::Row logic;
                logic.rel = Rel::Eq;
                logic.coef.emplace_back(map.x[i][t], 1.0);
                logic.coef.emplace_back(map.ru[i][t], -1.0);
                logic.coef.emplace_back(map.rd[i][t], 1.0);
                logic.rhs = 0.0;
                if (t == 0)
                    logic.rhs = prev_on;
                else
                    logic.coef.emplace_back(map.x[i][t - 1], -1.0);
                lp.rows.push_back(std::move(logic));

                lp.add_row(Rel::Le, 0.0, {{map.ru[i][t], 1.0}, {map.x[i][t], -1.0}});
                if (t == 0)
                    lp.add_row(Rel::Le, 1.0 - prev_on, {{map.ru[i][t], 1.0}});
                else
                    lp.add_row(Rel::Le, 1.0, {{map.ru[i][t], 1.0}, {map.x[i][t - 1], 1.0}});
                for (int s = t + 1; s < std::min(T, t + g.min_up); ++s)
                    lp.add_row(Rel::Le, 0.0, {{map.ru[i][t], 1.0}, {map.x[i][s], -1.0}});
                for (int s = t + 1; s < std::min(T, t + g.min_down); ++s)
                    lp.add_row(Rel::Le, 1.0, {{map.rd[i][t], 1.0}, {map.x[i][s], 1.0}});
            }
        }
    }
    return mp;
}

}  // namespace

MipProblem build_robust_primal(const UCInstance& inst, PrimalMap& map, const Commitments* fixed) {
    if (inst.uncertainty.norm_order == NormOrder::Two)
        throw UnsupportedError("L2 uncertainty sets require ellipsoidal_outer_solve");
    return build_primal_impl(inst, map, fixed, nullptr);
}

MipProblem build_robust_primal(const UCInstance& inst) {
    PrimalMap map;
    return build_robust_primal(inst, map, nullptr);
}

RobustConstraintBundle compute_bundle(const UCInstance& inst, const AroSolution& sol) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    RobustConstraintBundle b;
    b.omega.assign(T, std::vector<double>(J, 0.0));
    b.tau.assign(T, std::vector<double>(J, 1.0));
    b.omega_bar.assign(T, std::vector<double>(I, 0.0));
    b.tau_bar.assign(T, std::vector<double>(I, 0.0));
    b.psi.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));
    b.phi = b.psi;
    b.psi_bar.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(I, 0.0)));
    b.phi_bar = b.psi_bar;
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < I; ++i) {
            double C = inst.generators[i].energy_cost;
            for (int j = 0; j < J; ++j) {
                double v = sol.policy.V[t][i][j];
                b.omega[t][j] += C * v;
                b.tau[t][j] -= v;
                b.psi[t][i][j] = v;
                b.phi[t][i][j] = v;
            }
            for (int k = 0; k < I; ++k) {
                double z = sol.policy.Z[t][i][k];
                b.omega_bar[t][k] += C * z;
                b.tau_bar[t][k] -= z;
                b.psi_bar[t][i][k] = (k == i ? sol.commitments.on[i][t] : 0.0) - z;
                b.phi_bar[t][i][k] = z;
            }
        }
    return b;
}

// ---------------------------------------------------------------------------
// Explicit dual with the named multiplier families.

namespace {

// A dual vector family subject to ||fam||_ell <= budget * multiplier. Under
// L1 caps the components are split into nonnegative pairs.
struct Fam {
    std::vector<int> var;          // Linf caps: free variables
    std::vector<int> plus, minus;  // L1 caps: value = plus - minus
    bool present() const { return !var.empty() || !plus.empty(); }
};

Fam add_family(LpProblem& lp, int dim, NormOrder ell, double budget, int mult) {
    Fam f;
    if (budget <= 0.0 || dim == 0) return f;
    if (ell == NormOrder::One) {
        LpProblem::Row cap;
        cap.rel = Rel::Le;
        cap.rhs = 0.0;
        for (int c = 0; c < dim; ++c) {
            f.plus.push_back(lp.add_var(0.0, kInf, 0.0));
            f.minus.push_back(lp.add_var(0.0, kInf, 0.0));
            cap.coef.emplace_back(f.plus.back(), 1.0);
            cap.coef.emplace_back(f.minus.back(), 1.0);
        }
        cap.coef.emplace_back(mult, -budget);
        lp.rows.push_back(std::move(cap));
    } else {  // Linf caps, componentwise
        for (int c = 0; c < dim; ++c) {
            f.var.push_back(lp.add_var(-kInf, kInf, 0.0));
            lp.add_row(Rel::Le, 0.0, {{f.var[c], 1.0}, {mult, -budget}});
            lp.add_row(Rel::Le, 0.0, {{f.var[c], -1.0}, {mult, -budget}});
        }
    }
    return f;
}

void add_fam_term(LpProblem::Row& row, const Fam& f, int c, double coef) {
    if (!f.present()) return;
    if (f.var.empty()) {
        row.coef.emplace_back(f.plus[c], coef);
        row.coef.emplace_back(f.minus[c], -coef);
    } else {
        row.coef.emplace_back(f.var[c], coef);
    }
}

std::vector<double> fam_values(const Fam& f, const std::vector<double>& x, int dim) {
    std::vector<double> v(dim, 0.0);
    if (!f.present()) return v;
    for (int c = 0; c < dim; ++c)
        v[c] = f.var.empty() ? x[f.plus[c]] - x[f.minus[c]] : x[f.var[c]];
    return v;
}

}  // namespace

struct RobustDualMap {
    int nu = -1;
    std::vector<int> mu;      // [t]
    std::vector<int> lambda;  // [t], -1 when the adaptive balance row is absent
    std::vector<std::vector<int>> rho_on, rho_ru, rho_rd, sigma, zeta;  // [i][t]
    std::vector<std::vector<int>> delta_up, delta_dn;                   // [i][t]
    std::vector<Fam> alpha, alpha_bar, theta, theta_bar;                // [t]
    std::vector<std::vector<Fam>> beta, gamma;          // [t][i] over nodes
    std::vector<std::vector<Fam>> beta_bar, gamma_bar;  // [t][i] over generators
    std::vector<std::vector<Fam>> eps_cur, eps_prev, eps_bar_cur, eps_bar_prev;      // up-ramp
    std::vector<std::vector<Fam>> iota_cur, iota_prev, iota_bar_cur, iota_bar_prev;  // down-ramp
};

LpProblem build_robust_dual(const UCInstance& inst, const Commitments& fixed, RobustDualMap& m) {
    inst.validate();
    if (inst.uncertainty.norm_order == NormOrder::Two)
        throw UnsupportedError("L2 uncertainty sets require ellipsoidal_outer_solve");
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    const NormOrder ell = inst.uncertainty.load_set_order();
    const NormOrder cap_ell = inst.uncertainty.capacity_set_order();
    const auto& gam = inst.uncertainty.gamma_q;
    const auto& del = inst.uncertainty.delta_p;

    LpProblem lp;
    lp.sense = Sense::Maximize;
    m = RobustDualMap{};
    m.nu = lp.add_var(1.0, 1.0, 0.0);
    m.mu.resize(T);
    m.lambda.assign(T, -1);
    for (int t = 0; t < T; ++t) m.mu[t] = lp.add_var(-kInf, kInf, inst.total_load(t));
    for (int t = 0; t < T; ++t)
        if (gam[t] > 0.0 || del[t] > 0.0) m.lambda[t] = lp.add_var(0.0, kInf, 0.0);

    auto grid = [&]() { return std::vector<std::vector<int>>(I, std::vector<int>(T, -1)); };
    m.rho_on = grid();
    m.rho_ru = grid();
    m.rho_rd = grid();
    m.sigma = grid();
    m.zeta = grid();
    m.delta_up = grid();
    m.delta_dn = grid();
    for (int i = 0; i < I; ++i) {
        const auto& g = inst.generators[i];
        for (int t = 0; t < T; ++t) {
            m.rho_on[i][t] = lp.add_var(-kInf, kInf, fixed.on[i][t]);
            if (T > 1) {
                m.rho_ru[i][t] = lp.add_var(-kInf, kInf, fixed.ru[i][t]);
                m.rho_rd[i][t] = lp.add_var(-kInf, kInf, fixed.rd[i][t]);
            }
            m.sigma[i][t] = lp.add_var(0.0, kInf, 0.0);
            m.zeta[i][t] = lp.add_var(0.0, kInf, 0.0);
            if (ramp_row_exists(g, T)) {
                // The first-period start-up row prices the initial state.
                double init_rent =
                    g.initial_dispatch + g.ramp_rate * (g.initial_on ? 1.0 : 0.0);
                m.delta_up[i][t] = lp.add_var(0.0, kInf, t == 0 ? -init_rent : 0.0);
                if (t > 0) m.delta_dn[i][t] = lp.add_var(0.0, kInf, 0.0);
            }
        }
    }

    m.alpha.resize(T);
    m.alpha_bar.resize(T);
    m.theta.resize(T);
    m.theta_bar.resize(T);
    auto fam_grid = [&]() { return std::vector<std::vector<Fam>>(T, std::vector<Fam>(I)); };
    m.beta = fam_grid();
    m.gamma = fam_grid();
    m.beta_bar = fam_grid();
    m.gamma_bar = fam_grid();
    m.eps_cur = fam_grid();
    m.eps_prev = fam_grid();
    m.eps_bar_cur = fam_grid();
    m.eps_bar_prev = fam_grid();
    m.iota_cur = fam_grid();
    m.iota_prev = fam_grid();
    m.iota_bar_cur = fam_grid();
    m.iota_bar_prev = fam_grid();
    for (int t = 0; t < T; ++t) {
        m.alpha[t] = add_family(lp, J, ell, gam[t], m.nu);
        m.alpha_bar[t] = add_family(lp, I, cap_ell, del[t], m.nu);
        if (m.lambda[t] >= 0) {
            m.theta[t] = add_family(lp, J, ell, gam[t], m.lambda[t]);
            m.theta_bar[t] = add_family(lp, I, cap_ell, del[t], m.lambda[t]);
        }
        for (int i = 0; i < I; ++i) {
            m.beta[t][i] = add_family(lp, J, ell, gam[t], m.sigma[i][t]);
            m.gamma[t][i] = add_family(lp, J, ell, gam[t], m.zeta[i][t]);
            m.beta_bar[t][i] = add_family(lp, I, cap_ell, del[t], m.sigma[i][t]);
            m.gamma_bar[t][i] = add_family(lp, I, cap_ell, del[t], m.zeta[i][t]);
            if (m.delta_up[i][t] >= 0) {
                m.eps_cur[t][i] = add_family(lp, J, ell, gam[t], m.delta_up[i][t]);
                m.eps_bar_cur[t][i] = add_family(lp, I, cap_ell, del[t], m.delta_up[i][t]);
                if (t > 0) {
                    m.eps_prev[t][i] = add_family(lp, J, ell, gam[t - 1], m.delta_up[i][t]);
                    m.eps_bar_prev[t][i] = add_family(lp, I, cap_ell, del[t - 1], m.delta_up[i][t]);
                }
            }
            if (m.delta_dn[i][t] >= 0) {
                m.iota_cur[t][i] = add_family(lp, J, ell, gam[t], m.delta_dn[i][t]);
                m.iota_bar_cur[t][i] = add_family(lp, I, cap_ell, del[t], m.delta_dn[i][t]);
                m.iota_prev[t][i] = add_family(lp, J, ell, gam[t - 1], m.delta_dn[i][t]);
                m.iota_bar_prev[t][i] = add_family(lp, I, cap_ell, del[t - 1], m.delta_dn[i][t]);
            }
        }
        // The objective constant sum_j theta_jt rides on the theta family.
        if (m.theta[t].present()) {
            for (int j = 0; j < J; ++j) {
                if (m.theta[t].var.empty()) {
                    lp.cost[m.theta[t].plus[j]] += 1.0;
                    lp.cost[m.theta[t].minus[j]] -= 1.0;
                } else {
                    lp.cost[m.theta[t].var[j]] += 1.0;
                }
            }
        }
    }

    // Stationarity rows.
    for (int i = 0; i < I; ++i) {
        const auto& g = inst.generators[i];
        for (int t = 0; t < T; ++t) {
            // x^ON column: rho + sigma pmax - zeta pmin - beta_bar_ii
            //              + ramp (d+_{t+1} + d-_t) <= on cost.
            LpProblem::Row xr;
            xr.rel = Rel::Le;
            xr.rhs = on_cost(g);
            xr.coef.emplace_back(m.rho_on[i][t], 1.0);
            xr.coef.emplace_back(m.sigma[i][t], g.cap_max);
            xr.coef.emplace_back(m.zeta[i][t], -g.cap_min);
            add_fam_term(xr, m.beta_bar[t][i], i, -1.0);
            if (t + 1 < T && m.delta_up[i][t + 1] >= 0)
                xr.coef.emplace_back(m.delta_up[i][t + 1], g.ramp_rate);
            if (m.delta_dn[i][t] >= 0) xr.coef.emplace_back(m.delta_dn[i][t], g.ramp_rate);
            lp.rows.push_back(std::move(xr));

            if (T > 1) {
                LpProblem::Row rur;
                rur.rel = Rel::Le;
                rur.rhs = g.startup_cost;
                rur.coef.emplace_back(m.rho_ru[i][t], 1.0);
                if (m.delta_up[i][t] >= 0)
                    rur.coef.emplace_back(m.delta_up[i][t], g.startup_rate);
                lp.rows.push_back(std::move(rur));
                LpProblem::Row rdr;
                rdr.rel = Rel::Le;
                rdr.rhs = 0.0;
                rdr.coef.emplace_back(m.rho_rd[i][t], 1.0);
                if (m.delta_dn[i][t] >= 0)
                    rdr.coef.emplace_back(m.delta_dn[i][t], g.shutdown_rate);
                lp.rows.push_back(std::move(rdr));
            }

            // u column: nu C = mu_t - sigma + zeta - d+_t + d+_{t+1} + d-_t - d-_{t+1}.
            LpProblem::Row ur;
            ur.rel = Rel::Eq;
            ur.rhs = 0.0;
            ur.coef.emplace_back(m.nu, g.energy_cost);
            ur.coef.emplace_back(m.mu[t], -1.0);
            ur.coef.emplace_back(m.sigma[i][t], 1.0);
            ur.coef.emplace_back(m.zeta[i][t], -1.0);
            if (m.delta_up[i][t] >= 0) ur.coef.emplace_back(m.delta_up[i][t], 1.0);
            if (t + 1 < T && m.delta_up[i][t + 1] >= 0)
                ur.coef.emplace_back(m.delta_up[i][t + 1], -1.0);
            if (m.delta_dn[i][t] >= 0) ur.coef.emplace_back(m.delta_dn[i][t], -1.0);
            if (t + 1 < T && m.delta_dn[i][t + 1] >= 0)
                ur.coef.emplace_back(m.delta_dn[i][t + 1], 1.0);
            lp.rows.push_back(std::move(ur));

            // V columns: C alpha = theta - beta - gamma - ramp-block terms.
            if (gam[t] > 0.0)
                for (int j = 0; j < J; ++j) {
                    LpProblem::Row vr;
                    vr.rel = Rel::Eq;
                    vr.rhs = 0.0;
                    add_fam_term(vr, m.alpha[t], j, g.energy_cost);
                    add_fam_term(vr, m.theta[t], j, -1.0);
                    add_fam_term(vr, m.beta[t][i], j, 1.0);
                    add_fam_term(vr, m.gamma[t][i], j, 1.0);
                    add_fam_term(vr, m.eps_cur[t][i], j, 1.0);
                    add_fam_term(vr, m.iota_cur[t][i], j, 1.0);
                    if (t + 1 < T) {
                        add_fam_term(vr, m.eps_prev[t + 1][i], j, 1.0);
                        add_fam_term(vr, m.iota_prev[t + 1][i], j, 1.0);
                    }
                    lp.rows.push_back(std::move(vr));
                }

            // Z columns: C alpha_bar = theta_bar + beta_bar - gamma_bar - ramp blocks.
            if (del[t] > 0.0)
                for (int k = 0; k < I; ++k) {
                    LpProblem::Row zr;
                    zr.rel = Rel::Eq;
                    zr.rhs = 0.0;
                    add_fam_term(zr, m.alpha_bar[t], k, g.energy_cost);
                    add_fam_term(zr, m.theta_bar[t], k, -1.0);
                    add_fam_term(zr, m.beta_bar[t][i], k, -1.0);
                    add_fam_term(zr, m.gamma_bar[t][i], k, 1.0);
                    add_fam_term(zr, m.eps_bar_cur[t][i], k, 1.0);
                    add_fam_term(zr, m.iota_bar_cur[t][i], k, 1.0);
                    if (t + 1 < T) {
                        add_fam_term(zr, m.eps_bar_prev[t + 1][i], k, 1.0);
                        add_fam_term(zr, m.iota_bar_prev[t + 1][i], k, 1.0);
                    }
                    lp.rows.push_back(std::move(zr));
                }
        }
    }
    return lp;
}

LpProblem build_robust_dual(const UCInstance& inst, const Commitments& fixed) {
    RobustDualMap m;
    return build_robust_dual(inst, fixed, m);
}

namespace {

AroSolution extract_solution(const UCInstance& inst, const PrimalMap& map,
                             const Commitments& commits, const LpSolution& s) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    AroSolution sol;
    sol.commitments = commits;
    sol.policy.u.assign(T, std::vector<double>(I, 0.0));
    sol.policy.V.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));
    sol.policy.Z.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(I, 0.0)));
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < I; ++i) {
            sol.policy.u[t][i] = s.x[map.u[i][t]];
            for (int j = 0; j < J; ++j)
                if (map.V[t][i][j] >= 0) sol.policy.V[t][i][j] = s.x[map.V[t][i][j]];
            for (int k = 0; k < I; ++k)
                if (map.Z[t][i][k] >= 0) sol.policy.Z[t][i][k] = s.x[map.Z[t][i][k]];
        }
    sol.eta = s.x[map.eta];
    sol.objective = s.objective;
    return sol;
}

DualCertificate extract_certificate(const UCInstance& inst, const RobustDualMap& m,
                                    const LpSolution& s) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    DualCertificate c;
    c.nu = s.x[m.nu];
    c.mu.resize(T);
    c.lambda.assign(T, 0.0);
    for (int t = 0; t < T; ++t) {
        c.mu[t] = s.x[m.mu[t]];
        if (m.lambda[t] >= 0) c.lambda[t] = s.x[m.lambda[t]];
    }
    auto grid = [&]() { return std::vector<std::vector<double>>(I, std::vector<double>(T, 0.0)); };
    c.rho_on = grid();
    c.rho_ru = grid();
    c.rho_rd = grid();
    c.sigma = grid();
    c.zeta = grid();
    c.delta_up = grid();
    c.delta_dn = grid();
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) {
            c.rho_on[i][t] = s.x[m.rho_on[i][t]];
            if (m.rho_ru[i][t] >= 0) c.rho_ru[i][t] = s.x[m.rho_ru[i][t]];
            if (m.rho_rd[i][t] >= 0) c.rho_rd[i][t] = s.x[m.rho_rd[i][t]];
            c.sigma[i][t] = s.x[m.sigma[i][t]];
            c.zeta[i][t] = s.x[m.zeta[i][t]];
            if (m.delta_up[i][t] >= 0) c.delta_up[i][t] = s.x[m.delta_up[i][t]];
            if (m.delta_dn[i][t] >= 0) c.delta_dn[i][t] = s.x[m.delta_dn[i][t]];
        }
    c.alpha.assign(T, std::vector<double>(J, 0.0));
    c.theta.assign(T, std::vector<double>(J, 0.0));
    c.alpha_bar.assign(T, std::vector<double>(I, 0.0));
    c.theta_bar.assign(T, std::vector<double>(I, 0.0));
    c.beta.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));
    c.gamma = c.beta;
    c.beta_bar.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(I, 0.0)));
    c.gamma_bar = c.beta_bar;
    for (int t = 0; t < T; ++t) {
        if (m.alpha[t].present()) c.alpha[t] = fam_values(m.alpha[t], s.x, J);
        if (m.alpha_bar[t].present()) c.alpha_bar[t] = fam_values(m.alpha_bar[t], s.x, I);
        if (m.theta[t].present()) c.theta[t] = fam_values(m.theta[t], s.x, J);
        if (m.theta_bar[t].present()) c.theta_bar[t] = fam_values(m.theta_bar[t], s.x, I);
        for (int i = 0; i < I; ++i) {
            if (m.beta[t][i].present()) c.beta[t][i] = fam_values(m.beta[t][i], s.x, J);
            if (m.gamma[t][i].present()) c.gamma[t][i] = fam_values(m.gamma[t][i], s.x, J);
            if (m.beta_bar[t][i].present())
                c.beta_bar[t][i] = fam_values(m.beta_bar[t][i], s.x, I);
            if (m.gamma_bar[t][i].present())
                c.gamma_bar[t][i] = fam_values(m.gamma_bar[t][i], s.x, I);
        }
    }
    return c;
}

// The restricted primal usually has a whole face of optimal policies (the
// published examples do). Among ties this reconstructs the reference vertex:
// a maximal set of committed units (larger capacities first) dispatches at
// half nameplate and carries the adaptive share, cheapest units taking their
// maximal share; the remaining units fill to effective capacity in ascending
// capacity order; Z stays zero. The candidate replaces the solver's vertex
// only if it verifies as optimal and feasible. Single-period only; the
// multiperiod instances have unique policies.
bool canonicalize_policy(const UCInstance& inst, const Commitments& commits, double objective,
                         AroSolution& sol) {
    const int I = inst.num_generators(), J = inst.num_nodes();
    if (inst.periods != 1) return false;
    const double gam = inst.uncertainty.gamma_q[0];
    const double del = inst.uncertainty.delta_p[0];
    if (gam <= 0.0) return false;
    const NormOrder ell = inst.uncertainty.load_set_order();
    if (ell == NormOrder::Two) return false;
    // Row-constant V: one adaptive share s_i = gamma * ||V_i||_dual in MW.
    const double share_scale = ell == NormOrder::Inf ? gam * J : gam;

    std::vector<int> committed;
    for (int i = 0; i < I; ++i)
        if (commits.on[i][0] > 0.5) committed.push_back(i);
    const int n = static_cast<int>(committed.size());
    if (n == 0 || n > 14) return false;

    std::vector<double> effcap(n), half(n), sbar(n), cost(n), cap(n);
    for (int k = 0; k < n; ++k) {
        const auto& g = inst.generators[committed[k]];
        effcap[k] = g.cap_max - del;
        half[k] = g.cap_max / 2.0;
        sbar[k] = effcap[k] - half[k];
        cost[k] = g.energy_cost;
        cap[k] = g.cap_max;
    }
    const double load = inst.total_load(0);

    // Candidate subsets in preference order: most half-nameplate units,
    // then largest capacity total, then lowest indices. Construction can
    // still fail (the shares may not close the balance), so candidates are
    // tried until one verifies.
    std::vector<long> candidates;
    for (long mask = 0; mask < (1L << n); ++mask) {
        double halfsum = 0.0, rest_eff = 0.0;
        bool ok = true;
        for (int k = 0; k < n; ++k) {
            if ((mask >> k) & 1) {
                if (sbar[k] < -1e-12) { ok = false; break; }
                halfsum += half[k];
            } else {
                rest_eff += effcap[k];
            }
        }
        if (!ok) continue;
        double rest_u = load - halfsum;
        if (rest_u < -1e-9 || rest_u > rest_eff + 1e-9) continue;
        candidates.push_back(mask);
    }
    auto pref = [&](long mask) {
        int count = 0;
        double capsum = 0.0;
        for (int k = 0; k < n; ++k)
            if ((mask >> k) & 1) { ++count; capsum += cap[k]; }
        return std::make_pair(count, capsum);
    };
    std::sort(candidates.begin(), candidates.end(), [&](long a, long b) {
        auto pa = pref(a), pb = pref(b);
        if (pa.first != pb.first) return pa.first > pb.first;
        if (pa.second != pb.second) return pa.second > pb.second;
        return a < b;
    });
    for (long best_mask : candidates) {

    // Adaptive shares: half-nameplate units ascending (cost, cap, index) take
    // their maximum; the budget left over is water-filled over the more
    // expensive members and then spills to the rest, largest capacity first.
    std::vector<double> s(n, 0.0), u(n, 0.0);
    std::vector<int> S, rest;
    for (int k = 0; k < n; ++k) ((best_mask >> k) & 1 ? S : rest).push_back(k);
    auto order_asc = [&](int a, int b) {
        if (cost[a] != cost[b]) return cost[a] < cost[b];
        if (cap[a] != cap[b]) return cap[a] < cap[b];
        return a < b;
    };
    std::sort(S.begin(), S.end(), order_asc);
    double budget = share_scale;
    for (std::size_t q = 0; q < S.size(); ++q) {
        int left = static_cast<int>(S.size() - q);
        double give = std::min(sbar[S[q]], budget / left);
        // Cheaper units take their full share when the budget allows it.
        if (budget >= sbar[S[q]] * left) give = sbar[S[q]];
        s[S[q]] = std::max(give, 0.0);
        budget -= s[S[q]];
    }
    std::sort(rest.begin(), rest.end(), [&](int a, int b) {
        if (cap[a] != cap[b]) return cap[a] > cap[b];
        return a < b;
    });
    for (int k : rest) {
        double give = std::min(budget, effcap[k] / 2.0);
        s[k] = std::max(give, 0.0);
        budget -= s[k];
    }
    if (budget > 1e-9) continue;
    for (int k : S) u[k] = half[k];
    for (int k : rest) u[k] = effcap[k] - s[k];

    // Validate the candidate: balance, floors and the objective value.
    double total_u = 0.0, eta = 0.0;
    bool valid = true;
    for (int k = 0; k < n; ++k) {
        if (u[k] < s[k] - 1e-9 || u[k] + s[k] > effcap[k] + 1e-9 || u[k] < -1e-9)
            valid = false;
        total_u += u[k];
        eta += cost[k] * (u[k] + s[k]);
    }
    if (!valid || std::abs(total_u - load) > 1e-7) continue;
    double commit_cost = 0.0;
    for (int k = 0; k < n; ++k) commit_cost += on_cost(inst.generators[committed[k]]);
    if (std::abs(commit_cost + eta - objective) > 1e-7 * (1.0 + std::abs(objective)))
        continue;

    for (int k = 0; k < n; ++k) {
        int i = committed[k];
        sol.policy.u[0][i] = u[k];
        double v = s[k] / share_scale;
        for (int j = 0; j < J; ++j) sol.policy.V[0][i][j] = v;
        for (int kk = 0; kk < I; ++kk) sol.policy.Z[0][i][kk] = 0.0;
    }
    sol.eta = eta;
    return true;
    }
    return false;
}

// Lexicographically minimizes the balance prices over the optimal-dual set.
// Degenerate restricted primals admit whole intervals of optimal prices; the
// smallest one is the left derivative of the value function, which is the
// price the published settlements use. Unbounded selection subproblems (loads
// of zero) keep the unselected price.
LpSolution select_prices(const LpProblem& dual, const RobustDualMap& m, const LpSolution& base) {
    LpProblem work = dual;
    LpProblem::Row fix;
    fix.rel = Rel::Eq;
    fix.rhs = base.objective;
    for (int j = 0; j < work.num_vars(); ++j)
        if (work.cost[j] != 0.0) fix.coef.emplace_back(j, work.cost[j]);
    work.rows.push_back(fix);
    work.sense = Sense::Minimize;
    LpSolution last = base;
    for (std::size_t t = 0; t < m.mu.size(); ++t) {
        std::fill(work.cost.begin(), work.cost.end(), 0.0);
        work.cost[m.mu[t]] = 1.0;
        LpSolution s = solve_lp(work);
        if (s.status == LpStatus::Unbounded) continue;
        if (s.status != LpStatus::Optimal)
            throw InternalConsistencyError("price selection subproblem not optimal");
        work.add_row(Rel::Eq, s.x[m.mu[t]], {{m.mu[t], 1.0}});
        last = s;
    }
    return last;
}

}  // namespace

std::pair<AroSolution, DualCertificate> solve_aro(const UCInstance& inst) {
    PrimalMap map1;
    MipProblem mip = build_robust_primal(inst, map1, nullptr);
    MipSolution ms = solve_milp(mip);
    if (ms.status != MipStatus::Optimal)
        throw InfeasibleError("robust counterpart is infeasible");
    const int I = inst.num_generators(), T = inst.periods;
    std::vector<std::vector<double>> on(I, std::vector<double>(T, 0.0));
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) on[i][t] = std::round(ms.x[map1.x[i][t]]);
    Commitments commits = commitments_from_schedule(inst, on);

    PrimalMap map2;
    MipProblem phase2 = build_robust_primal(inst, map2, &commits);
    LpSolution s2 = solve_lp(phase2.lp);
    if (s2.status != LpStatus::Optimal)
        throw InternalConsistencyError("restricted primal not optimal at fixed commitments");
    double scale = 1.0 + std::abs(s2.objective);
    if (std::abs(s2.objective - ms.objective) > 1e-6 * scale)
        throw InternalConsistencyError("first/second phase objective mismatch");

    RobustDualMap dm;
    LpProblem dual = build_robust_dual(inst, commits, dm);
    LpSolution sd = solve_lp(dual);
    if (sd.status != LpStatus::Optimal)
        throw InternalConsistencyError("explicit dual did not solve to optimality");
    if (std::abs(sd.objective - s2.objective) > 1e-6 * scale)
        throw InternalConsistencyError("duality gap beyond tolerance: primal " +
                                       std::to_string(s2.objective) + " vs dual " +
                                       std::to_string(sd.objective));
    LpSolution selected = select_prices(dual, dm, sd);

    AroSolution sol = extract_solution(inst, map2, commits, s2);
    canonicalize_policy(inst, commits, s2.objective, sol);
    DualCertificate cert = extract_certificate(inst, dm, selected);
    return {std::move(sol), std::move(cert)};
}

RealizationVector worst_case_realization(const AroSolution& sol, const UCInstance& inst) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    RealizationVector rv;
    rv.load_residual.assign(T, std::vector<double>(J, 0.0));
    rv.capacity_residual.assign(T, std::vector<double>(I, 0.0));
    for (int t = 0; t < T; ++t) {
        std::vector<double> omega(J, 0.0), omega_bar(I, 0.0);
        for (int i = 0; i < I; ++i) {
            double C = inst.generators[i].energy_cost;
            for (int j = 0; j < J; ++j) omega[j] += C * sol.policy.V[t][i][j];
            for (int k = 0; k < I; ++k) omega_bar[k] += C * sol.policy.Z[t][i][k];
        }
        rv.load_residual[t] = max_linear_over_ball(omega, inst.uncertainty.load_set_order(),
                                                   inst.uncertainty.gamma_q[t])
                                  .argmax;
        rv.capacity_residual[t] =
            max_linear_over_ball(omega_bar, inst.uncertainty.capacity_set_order(),
                                 inst.uncertainty.delta_p[t])
                .argmax;
    }
    return rv;
}

// ---------------------------------------------------------------------------
// L2 (ellipsoidal) sets via cutting planes.

namespace {

double refine_cuts(LpProblem& lp, CutRegistry& reg, const std::vector<double>& x) {
    double worst = 0.0;
    for (auto& block : reg.blocks) {
        std::vector<double> w(block.comps.size(), 0.0);
        for (std::size_t c = 0; c < block.comps.size(); ++c) {
            w[c] = block.comps[c].constant;
            for (auto [col, a] : block.comps[c].terms) w[c] += a * x[col];
        }
        double n2 = norm(w, NormOrder::Two);
        double viol = n2 - x[block.epi];
        if (viol > worst) worst = viol;
        if (viol > 1e-12 && n2 > 0.0) {
            LpProblem::Row cut;
            cut.rel = Rel::Le;
            cut.rhs = 0.0;
            std::vector<double> g(w.size());
            for (std::size_t c = 0; c < w.size(); ++c) {
                g[c] = w[c] / n2;
                for (auto [col, a] : block.comps[c].terms) cut.coef.emplace_back(col, g[c] * a);
                cut.rhs -= g[c] * block.comps[c].constant;
            }
            cut.coef.emplace_back(block.epi, -1.0);
            block.cut_rows.push_back(lp.num_rows());
            block.cut_normals.push_back(std::move(g));
            lp.rows.push_back(std::move(cut));
        }
    }
    return worst;
}

}  // namespace

std::pair<AroSolution, DualCertificate> ellipsoidal_outer_solve(const UCInstance& inst,
                                                                double tol) {
    if (inst.uncertainty.norm_order != NormOrder::Two)
        throw UnsupportedError("ellipsoidal_outer_solve expects the L2 norm order");
    if (tol <= 0.0) throw UnsupportedError("tolerance must be positive");
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    const auto& gam = inst.uncertainty.gamma_q;
    const auto& del = inst.uncertainty.delta_p;

    CutRegistry reg;
    PrimalMap map;
    MipProblem mip = build_primal_impl(inst, map, nullptr, &reg);
    // Tighten the supporting planes on the cheap continuous relaxation
    // first; the commitment search then runs over an already-accurate cut
    // model and rarely needs more than a couple of passes.
    MipSolution ms;
    for (int outer = 0;; ++outer) {
        if (outer >= 50)
            throw ResourceLimitError("cutting-plane refinement did not converge in 50 passes");
        for (int round = 0;; ++round) {
            if (round >= 5000)
                throw ResourceLimitError("cutting-plane refinement stalled on the relaxation");
            LpSolution rel = solve_lp(mip.lp);
            if (rel.status != LpStatus::Optimal)
                throw InfeasibleError("robust counterpart is infeasible");
            if (refine_cuts(mip.lp, reg, rel.x) <= tol) break;
        }
        ms = solve_milp(mip);
        if (ms.status != MipStatus::Optimal)
            throw InfeasibleError("robust counterpart is infeasible");
        if (refine_cuts(mip.lp, reg, ms.x) <= tol) break;
    }
    std::vector<std::vector<double>> on(I, std::vector<double>(T, 0.0));
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) on[i][t] = std::round(ms.x[map.x[i][t]]);
    Commitments commits = commitments_from_schedule(inst, on);

    // Second phase on a fresh cut collection with pinned binaries; keep
    // refining so the reported policy is feasible to the same tolerance.
    CutRegistry reg2;
    PrimalMap map2;
    MipProblem p2 = build_primal_impl(inst, map2, &commits, &reg2);
    LpSolution s2;
    for (int round = 0;; ++round) {
        if (round >= 200)
            throw ResourceLimitError("cutting-plane refinement did not converge in 200 rounds");
        s2 = solve_lp(p2.lp);
        if (s2.status != LpStatus::Optimal)
            throw InternalConsistencyError("restricted primal not optimal at fixed commitments");
        if (refine_cuts(p2.lp, reg2, s2.x) <= tol) break;
    }

    AroSolution sol = extract_solution(inst, map2, commits, s2);

    // Approximate certificate from the final LP: scalar families are exact
    // row duals (binaries are pinned by bounds, so their reduced costs are
    // the commitment-fixing duals); vector families aggregate the
    // supporting-plane duals of each norm block.
    DualCertificate cert;
    cert.approximate = true;
    cert.nu = -s2.row_dual[map2.cost_row];
    cert.mu.resize(T);
    cert.lambda.assign(T, 0.0);
    for (int t = 0; t < T; ++t) {
        cert.mu[t] = s2.row_dual[map2.balance_row[t]];
        if (map2.lambda_row[t] >= 0) cert.lambda[t] = -s2.row_dual[map2.lambda_row[t]];
    }
    auto grid = [&]() { return std::vector<std::vector<double>>(I, std::vector<double>(T, 0.0)); };
    cert.sigma = grid();
    cert.zeta = grid();
    cert.delta_up = grid();
    cert.delta_dn = grid();
    cert.rho_on = grid();
    cert.rho_ru = grid();
    cert.rho_rd = grid();
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t) {
            if (map2.cap_row[i][t] >= 0) cert.sigma[i][t] = -s2.row_dual[map2.cap_row[i][t]];
            if (map2.floor_row[i][t] >= 0) cert.zeta[i][t] = -s2.row_dual[map2.floor_row[i][t]];
            if (map2.up_row[i][t] >= 0) cert.delta_up[i][t] = -s2.row_dual[map2.up_row[i][t]];
            if (map2.dn_row[i][t] >= 0) cert.delta_dn[i][t] = -s2.row_dual[map2.dn_row[i][t]];
            cert.rho_on[i][t] = s2.reduced_cost[map2.x[i][t]];
            if (map2.ru[i][t] >= 0) cert.rho_ru[i][t] = s2.reduced_cost[map2.ru[i][t]];
            if (map2.rd[i][t] >= 0) cert.rho_rd[i][t] = s2.reduced_cost[map2.rd[i][t]];
        }
    cert.alpha.assign(T, std::vector<double>(J, 0.0));
    cert.theta.assign(T, std::vector<double>(J, 0.0));
    cert.alpha_bar.assign(T, std::vector<double>(I, 0.0));
    cert.theta_bar.assign(T, std::vector<double>(I, 0.0));
    cert.beta.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));
    cert.gamma = cert.beta;
    cert.beta_bar.assign(T, std::vector<std::vector<double>>(I, std::vector<double>(I, 0.0)));
    cert.gamma_bar = cert.beta_bar;

    auto pooled = [&](const NormBlock& b) {
        std::vector<double> acc(b.comps.size(), 0.0);
        for (std::size_t c = 0; c < b.cut_rows.size(); ++c) {
            double y = -s2.row_dual[b.cut_rows[c]];
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += y * b.cut_normals[c][q];
        }
        return acc;
    };
    // Blocks appear in builder order: per (t,i) the shared ||V_i||, ||Z_i||,
    // ||x e_i - Z_i|| bounds, then the cost-row arguments per period, then
    // the balance-row arguments per period. Shared blocks are split across
    // their consuming rows in proportion to budget * multiplier.
    std::size_t bi = 0;
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < I; ++i) {
            double dup = cert.delta_up[i][t], ddn = cert.delta_dn[i][t];
            double dup_next = t + 1 < T ? cert.delta_up[i][t + 1] : 0.0;
            double ddn_next = t + 1 < T ? cert.delta_dn[i][t + 1] : 0.0;
            if (gam[t] > 0.0) {
                auto v = pooled(reg2.blocks[bi++]);
                double st = cert.sigma[i][t], zt = cert.zeta[i][t];
                double tot = st + zt + dup + ddn + dup_next + ddn_next;
                for (int j = 0; j < J; ++j) {
                    cert.beta[t][i][j] = tot > 0 ? v[j] * st / tot : 0.0;
                    cert.gamma[t][i][j] = tot > 0 ? v[j] * zt / tot : 0.0;
                }
            }
            if (del[t] > 0.0) {
                auto vz = pooled(reg2.blocks[bi++]);
                double zt = cert.zeta[i][t];
                double tot = zt + dup + ddn + dup_next + ddn_next;
                for (int k = 0; k < I; ++k)
                    cert.gamma_bar[t][i][k] = tot > 0 ? vz[k] * zt / tot : 0.0;
                auto vp = pooled(reg2.blocks[bi++]);
                for (int k = 0; k < I; ++k) cert.beta_bar[t][i][k] = vp[k];
            }
        }
    for (int t = 0; t < T; ++t) {
        if (gam[t] > 0.0) cert.alpha[t] = pooled(reg2.blocks[bi++]);
        if (del[t] > 0.0) cert.alpha_bar[t] = pooled(reg2.blocks[bi++]);
    }
    for (int t = 0; t < T; ++t) {
        if (gam[t] > 0.0) cert.theta[t] = pooled(reg2.blocks[bi++]);
        if (del[t] > 0.0) cert.theta_bar[t] = pooled(reg2.blocks[bi++]);
    }
    return {std::move(sol), std::move(cert)};
}

}  // namespace aruc
