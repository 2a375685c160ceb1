#include "aruc/intraday.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aruc/errors.hpp"
#include "aruc/lp.hpp"
#include "aruc/mip.hpp"
#include "aruc/norms.hpp"

namespace aruc {

IntradayResult intraday_dispatch(const UCInstance& inst, const AroSolution& sol,
                                 const std::vector<double>& residual_load) {
    if (inst.periods != 1)
        throw UnsupportedError("intraday dispatch is defined for single-period instances");
    const int I = inst.num_generators(), J = inst.num_nodes();
    if (static_cast<int>(residual_load.size()) != J)
        throw DimensionError("residual load must have one entry per node");
    for (double d : residual_load)
        if (d < 0.0) throw ValidationError("residual load must be nonnegative");

    IntradayResult res;
    res.realized_total = std::accumulate(residual_load.begin(), residual_load.end(), 0.0);
    std::vector<double> headroom(I, 0.0);
    double total_headroom = 0.0;
    for (int i = 0; i < I; ++i) {
        headroom[i] = std::max(
            0.0, inst.generators[i].cap_max * sol.commitments.on[i][0] - sol.policy.u[0][i]);
        total_headroom += headroom[i];
    }
    if (res.realized_total > total_headroom + 1e-9)
        throw InfeasibleError("realized residual load " + std::to_string(res.realized_total) +
                              " exceeds residual capacity " + std::to_string(total_headroom));

    LpProblem lp;
    std::vector<int> p(I);
    for (int i = 0; i < I; ++i)
        p[i] = lp.add_var(0.0, headroom[i], inst.generators[i].energy_cost);
    LpProblem::Row bal;
    bal.rel = Rel::Eq;
    bal.rhs = res.realized_total;
    for (int i = 0; i < I; ++i) bal.coef.emplace_back(p[i], 1.0);
    lp.rows.push_back(std::move(bal));
    LpSolution s = solve_lp(lp);
    if (s.status != LpStatus::Optimal) throw InfeasibleError("intraday dispatch LP infeasible");
    res.cost = s.objective;
    res.dispatch.assign(I, 0.0);
    for (int i = 0; i < I; ++i) res.dispatch[i] = s.x[p[i]];

    // Left price of the merit order: the cost of the most expensive unit
    // actually used; at zero load, the cheapest unit with headroom.
    std::vector<int> order(I);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (inst.generators[a].energy_cost != inst.generators[b].energy_cost)
            return inst.generators[a].energy_cost < inst.generators[b].energy_cost;
        return a < b;
    });
    double remaining = res.realized_total;
    double price = 0.0;
    bool priced = false;
    for (int i : order) {
        if (headroom[i] <= 1e-12) continue;
        if (!priced) {
            price = inst.generators[i].energy_cost;  // zero-load marginal unit
            priced = true;
        }
        if (remaining <= 1e-12) break;
        double take = std::min(remaining, headroom[i]);
        remaining -= take;
        price = inst.generators[i].energy_cost;
    }
    res.marginal_price = price;

    for (int i = 0; i < I; ++i) {
        double vd = 0.0;
        for (int j = 0; j < J; ++j) vd += sol.policy.V[0][i][j] * residual_load[j];
        res.adaptive_bound += inst.generators[i].energy_cost * vd;
    }
    return res;
}

std::vector<IntradayResult> realization_sweep(const UCInstance& inst, const AroSolution& sol,
                                              int grid) {
    if (grid < 2) throw ValidationError("sweep grid must have at least two points");
    double gamma = inst.uncertainty.gamma_q.at(0);
    std::vector<IntradayResult> out;
    out.reserve(grid);
    for (int k = 0; k < grid; ++k) {
        std::vector<double> d(inst.num_nodes(), 0.0);
        d[0] = gamma * k / (grid - 1);
        out.push_back(intraday_dispatch(inst, sol, d));
    }
    return out;
}

std::string sweep_to_csv(const std::vector<IntradayResult>& sweep) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << "total_residual_mw,lp_cost,adaptive_bound,marginal_price\n";
    for (const auto& r : sweep)
        out << r.realized_total << ',' << r.cost << ',' << r.adaptive_bound << ','
            << r.marginal_price << '\n';
    return out.str();
}

ProfitReport decentralized_profit(const UCInstance& inst, const DualCertificate& cert,
                                  const AroSolution& sol, int generator, bool enforce) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    if (generator < 0 || generator >= I) throw DimensionError("generator index out of range");
    const auto& g = inst.generators[generator];
    const auto& gam = inst.uncertainty.gamma_q;
    const auto& del = inst.uncertainty.delta_p;
    const NormOrder dual_load = dual_order(inst.uncertainty.load_set_order());
    const NormOrder dual_cap = dual_order(inst.uncertainty.capacity_set_order());
    RealizationVector wc = worst_case_realization(sol, inst);

    auto dotv = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t q = 0; q < a.size(); ++q) s += a[q] * b[q];
        return s;
    };
    double init_rent = 0.0;
    if (T > 1 && g.ramp_limited())
        init_rent = g.initial_dispatch + g.ramp_rate * (g.initial_on ? 1.0 : 0.0);

    ProfitReport rep;
    rep.generator = g.id;
    // Market-schedule profit at the centralized prices.
    for (int t = 0; t < T; ++t) {
        double revenue = cert.mu[t] * sol.policy.u[t][generator] +
                         dotv(cert.theta[t], sol.policy.V[t][generator]) +
                         dotv(cert.theta_bar[t], sol.policy.Z[t][generator]) +
                         cert.rho_on[generator][t] * sol.commitments.on[generator][t];
        double cost = on_cost(g) * sol.commitments.on[generator][t] +
                      g.energy_cost * sol.policy.u[t][generator] +
                      g.energy_cost * (dotv(sol.policy.V[t][generator], wc.load_residual[t]) +
                                       dotv(sol.policy.Z[t][generator], wc.capacity_residual[t]));
        if (T > 1) {
            revenue += cert.rho_ru[generator][t] * sol.commitments.ru[generator][t] +
                       cert.rho_rd[generator][t] * sol.commitments.rd[generator][t];
            cost += g.startup_cost * sol.commitments.ru[generator][t];
        }
        rep.centralized += revenue - cost;
    }
    rep.centralized -= cert.delta_up[generator][0] * init_rent;

    // Individual profit maximization over the generator's own robust set.
    MipProblem mp;
    LpProblem& lp = mp.lp;
    std::vector<int> x(T), ru(T, -1), rd(T, -1), u(T);
    std::vector<std::vector<int>> V(T), Z(T);
    for (int t = 0; t < T; ++t) {
        double rev_x = cert.rho_on[generator][t] - on_cost(g);
        x[t] = lp.add_var(0.0, 1.0, rev_x);
        mp.binaries.push_back(x[t]);
    }
    if (T > 1)
        for (int t = 0; t < T; ++t) {
            ru[t] = lp.add_var(0.0, 1.0, cert.rho_ru[generator][t] - g.startup_cost);
            rd[t] = lp.add_var(0.0, 1.0, cert.rho_rd[generator][t]);
        }
    for (int t = 0; t < T; ++t) u[t] = lp.add_var(-kInf, kInf, cert.mu[t] - g.energy_cost);
    for (int t = 0; t < T; ++t) {
        if (gam[t] > 0.0) {
            V[t].resize(J);
            for (int j = 0; j < J; ++j)
                V[t][j] = lp.add_var(-kInf, kInf,
                                     cert.theta[t][j] - g.energy_cost * wc.load_residual[t][j]);
        }
        if (del[t] > 0.0) {
            Z[t].resize(I);
            for (int k = 0; k < I; ++k)
                Z[t][k] = lp.add_var(
                    -kInf, kInf, cert.theta_bar[t][k] - g.energy_cost * wc.capacity_residual[t][k]);
        }
    }
    lp.objective_offset = -cert.delta_up[generator][0] * init_rent;

    // Norm bounds: ||V_t|| (load dual), ||Z_t||, ||x e_i - Z_t|| (capacity dual).
    auto bound_abs = [&lp](const std::vector<std::pair<int, double>>& terms, double cst,
                           int bound) {
        LpProblem::Row r1, r2;
        r1.rel = r2.rel = Rel::Le;
        r1.rhs = -cst;
        r2.rhs = cst;
        for (auto [c, a] : terms) {
            r1.coef.emplace_back(c, a);
            r2.coef.emplace_back(c, -a);
        }
        r1.coef.emplace_back(bound, -1.0);
        r2.coef.emplace_back(bound, -1.0);
        lp.rows.push_back(std::move(r1));
        lp.rows.push_back(std::move(r2));
    };
    auto norm_expr = [&](const std::vector<int>& vars, NormOrder dual, int xvar,
                         int diag) -> std::vector<std::pair<int, double>> {
        // Returns coefficient list whose value bounds the dual norm of
        // (vars) or (x e_i - vars) when xvar >= 0.
        std::vector<std::pair<int, double>> expr;
        if (vars.empty()) return expr;
        if (dual == NormOrder::Inf) {  // load sets with ell = 1
            int n = lp.add_var(0.0, kInf, 0.0);
            for (std::size_t c = 0; c < vars.size(); ++c) {
                std::vector<std::pair<int, double>> term{{vars[c], xvar >= 0 ? -1.0 : 1.0}};
                if (xvar >= 0 && static_cast<int>(c) == diag) term.emplace_back(xvar, 1.0);
                bound_abs(term, 0.0, n);
            }
            expr.emplace_back(n, 1.0);
        } else {  // dual == One
            for (std::size_t c = 0; c < vars.size(); ++c) {
                int s = lp.add_var(0.0, kInf, 0.0);
                std::vector<std::pair<int, double>> term{{vars[c], xvar >= 0 ? -1.0 : 1.0}};
                if (xvar >= 0 && static_cast<int>(c) == diag) term.emplace_back(xvar, 1.0);
                bound_abs(term, 0.0, s);
                expr.emplace_back(s, 1.0);
            }
        }
        return expr;
    };
    std::vector<std::vector<std::pair<int, double>>> nV(T), nZ(T), nPsiBar(T);
    for (int t = 0; t < T; ++t) {
        if (gam[t] > 0.0) nV[t] = norm_expr(V[t], dual_load, -1, -1);
        if (del[t] > 0.0) {
            nZ[t] = norm_expr(Z[t], dual_cap, -1, -1);
            nPsiBar[t] = norm_expr(Z[t], dual_cap, x[t], generator);
        }
    }
    for (int t = 0; t < T; ++t) {
        LpProblem::Row capr;  // u + gam ||V|| + del ||x e - Z|| <= cap x
        capr.rel = Rel::Le;
        capr.rhs = 0.0;
        capr.coef.emplace_back(u[t], 1.0);
        capr.coef.emplace_back(x[t], -g.cap_max);
        for (auto [c, a] : nV[t]) capr.coef.emplace_back(c, gam[t] * a);
        for (auto [c, a] : nPsiBar[t]) capr.coef.emplace_back(c, del[t] * a);
        lp.rows.push_back(std::move(capr));
        LpProblem::Row flo;  // -u + cap_min x + gam ||V|| + del ||Z|| <= 0
        flo.rel = Rel::Le;
        flo.rhs = 0.0;
        flo.coef.emplace_back(u[t], -1.0);
        flo.coef.emplace_back(x[t], g.cap_min);
        for (auto [c, a] : nV[t]) flo.coef.emplace_back(c, gam[t] * a);
        for (auto [c, a] : nZ[t]) flo.coef.emplace_back(c, del[t] * a);
        lp.rows.push_back(std::move(flo));
    }
    if (T > 1 && g.ramp_limited()) {
        for (int t = 0; t < T; ++t) {
            LpProblem::Row up;
            up.rel = Rel::Le;
            up.rhs = t == 0 ? init_rent : 0.0;
            up.coef.emplace_back(u[t], 1.0);
            up.coef.emplace_back(ru[t], -g.startup_rate);
            if (t > 0) {
                up.coef.emplace_back(u[t - 1], -1.0);
                up.coef.emplace_back(x[t - 1], -g.ramp_rate);
            }
            for (auto [c, a] : nV[t]) up.coef.emplace_back(c, gam[t] * a);
            for (auto [c, a] : nZ[t]) up.coef.emplace_back(c, del[t] * a);
            if (t > 0) {
                for (auto [c, a] : nV[t - 1]) up.coef.emplace_back(c, gam[t - 1] * a);
                for (auto [c, a] : nZ[t - 1]) up.coef.emplace_back(c, del[t - 1] * a);
            }
            lp.rows.push_back(std::move(up));
            if (t > 0) {
                LpProblem::Row dn;
                dn.rel = Rel::Le;
                dn.rhs = 0.0;
                dn.coef.emplace_back(u[t - 1], 1.0);
                dn.coef.emplace_back(u[t], -1.0);
                dn.coef.emplace_back(x[t], -g.ramp_rate);
                dn.coef.emplace_back(rd[t], -g.shutdown_rate);
                for (auto [c, a] : nV[t]) dn.coef.emplace_back(c, gam[t] * a);
                for (auto [c, a] : nZ[t]) dn.coef.emplace_back(c, del[t] * a);
                for (auto [c, a] : nV[t - 1]) dn.coef.emplace_back(c, gam[t - 1] * a);
                for (auto [c, a] : nZ[t - 1]) dn.coef.emplace_back(c, del[t - 1] * a);
                lp.rows.push_back(std::move(dn));
            }
        }
    }
    if (T > 1) {
        double prev_on = g.initial_on ? 1.0 : 0.0;
        for (int t = 0; t < T; ++t) {
            LpProblem::Row logic;
            logic.rel = Rel::Eq;
            logic.rhs = t == 0 ? prev_on : 0.0;
            logic.coef.emplace_back(x[t], 1.0);
            logic.coef.emplace_back(ru[t], -1.0);
            logic.coef.emplace_back(rd[t], 1.0);
            if (t > 0) logic.coef.emplace_back(x[t - 1], -1.0);
            lp.rows.push_back(std::move(logic));
            lp.add_row(Rel::Le, 0.0, {{ru[t], 1.0}, {x[t], -1.0}});
            if (t == 0)
                lp.add_row(Rel::Le, 1.0 - prev_on, {{ru[t], 1.0}});
            else
                lp.add_row(Rel::Le, 1.0, {{ru[t], 1.0}, {x[t - 1], 1.0}});
            for (int s = t + 1; s < std::min(T, t + g.min_up); ++s)
                lp.add_row(Rel::Le, 0.0, {{ru[t], 1.0}, {x[s], -1.0}});
            for (int s = t + 1; s < std::min(T, t + g.min_down); ++s)
                lp.add_row(Rel::Le, 1.0, {{rd[t], 1.0}, {x[s], 1.0}});
        }
    }
    lp.sense = Sense::Maximize;
    MipSolution ms = solve_milp(mp);
    if (ms.status != MipStatus::Optimal)
        throw InternalConsistencyError("self-scheduling audit MILP infeasible");
    rep.decentralized = ms.objective;
    rep.self_schedule_incentive = rep.decentralized - rep.centralized > 1e-6;

    if (enforce) {
        double scale = 1.0 + std::abs(sol.objective);
        double tol = (cert.approximate ? 1e-4 : 1e-6) * scale;
        if (std::abs(rep.centralized) > tol)
            throw InternalConsistencyError("centralized profit of " + g.id +
                                           " is not zero: " + std::to_string(rep.centralized));
        if (rep.decentralized > rep.centralized + tol)
            throw InternalConsistencyError("self-scheduling incentive detected for " + g.id);
    }
    return rep;
}

}  // namespace aruc
