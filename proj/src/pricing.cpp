#include "aruc/pricing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aruc/errors.hpp"
#include "aruc/lp.hpp"
#include "aruc/norms.hpp"

namespace aruc {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double ramp_init_rent(const GeneratorSpec& g, int T) {
    if (T <= 1 || !g.ramp_limited()) return 0.0;
    return g.initial_dispatch + g.ramp_rate * (g.initial_on ? 1.0 : 0.0);
}

}  // namespace

double PaymentTable::grand_total() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.total();
    return s;
}

std::string PaymentTable::to_csv() const {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << "scheme,generator,commitment,energy,uncertainty,uplift,total\n";
    for (const auto& r : rows)
        out << scheme << ',' << r.generator << ',' << r.commitment << ',' << r.energy << ','
            << r.uncertainty << ',' << r.uplift << ',' << r.total() << '\n';
    return out.str();
}

PaymentTable pay_as_bid_day_ahead(const AroSolution& sol, const UCInstance& inst) {
    PaymentTable table;
    table.scheme = "payasbid";
    const int T = inst.periods;
    for (int i = 0; i < inst.num_generators(); ++i) {
        const auto& g = inst.generators[i];
        PaymentRow row;
        row.generator = g.id;
        for (int t = 0; t < T; ++t) {
            row.commitment += on_cost(g) * sol.commitments.on[i][t];
            if (!sol.commitments.ru.empty())
                row.commitment += g.startup_cost * sol.commitments.ru[i][t];
            row.energy += g.energy_cost * sol.policy.u[t][i];
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

PaymentTable adaptive_uniform_day_ahead(const AroSolution& sol, const DualCertificate& cert,
                                        const UCInstance& inst) {
    PaymentTable table;
    table.scheme = "uniform";
    const int T = inst.periods;
    const NormOrder dual_load = dual_order(inst.uncertainty.load_set_order());
    const NormOrder dual_cap = dual_order(inst.uncertainty.capacity_set_order());
    RobustConstraintBundle b = compute_bundle(inst, sol);
    for (int i = 0; i < inst.num_generators(); ++i) {
        const auto& g = inst.generators[i];
        PaymentRow row;
        row.generator = g.id;
        for (int t = 0; t < T; ++t) {
            double gam = inst.uncertainty.gamma_q[t], del = inst.uncertainty.delta_p[t];
            double x = sol.commitments.on[i][t];
            row.energy += cert.mu[t] * sol.policy.u[t][i];
            row.uplift += (cert.rho_on[i][t] - cert.beta_bar[t][i][i]) * x;
            if (!sol.commitments.ru.empty()) {
                row.uplift += cert.rho_ru[i][t] * sol.commitments.ru[i][t];
                row.uplift += cert.rho_rd[i][t] * sol.commitments.rd[i][t];
            }
            double nv = norm(b.psi[t][i], dual_load);
            double nz = norm(b.phi_bar[t][i], dual_cap);
            double npsib = norm(b.psi_bar[t][i], dual_cap);
            row.uncertainty += cert.sigma[i][t] * (gam * nv + del * npsib);
            row.uncertainty += cert.zeta[i][t] * (gam * nv + del * nz);
            // Ramp rows price the adjacent periods' adaptive shares too.
            double up = cert.delta_up[i][t], dn = cert.delta_dn[i][t];
            if (up != 0.0 || dn != 0.0) {
                double span = gam * nv + del * nz;
                if (t > 0)
                    span += inst.uncertainty.gamma_q[t - 1] * norm(b.psi[t - 1][i], dual_load) +
                            inst.uncertainty.delta_p[t - 1] * norm(b.phi_bar[t - 1][i], dual_cap);
                row.uncertainty += (up + dn) * span;
            }
        }
        row.uplift -= cert.delta_up[i][0] * ramp_init_rent(g, T);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::pair<PaymentTable, PaymentTable> worst_case_settlement(const AroSolution& sol,
                                                            const DualCertificate& cert,
                                                            const UCInstance& inst) {
    const int T = inst.periods;
    RealizationVector wc = worst_case_realization(sol, inst);
    PaymentTable f = pay_as_bid_day_ahead(sol, inst);
    f.scheme = "worstcase-payasbid";
    PaymentTable gt;
    gt.scheme = "worstcase-uniform";
    for (int i = 0; i < inst.num_generators(); ++i) {
        const auto& g = inst.generators[i];
        for (int t = 0; t < T; ++t) {
            f.rows[i].uncertainty +=
                g.energy_cost * (dot(sol.policy.V[t][i], wc.load_residual[t]) +
                                 dot(sol.policy.Z[t][i], wc.capacity_residual[t]));
        }
        PaymentRow row;
        row.generator = g.id;
        for (int t = 0; t < T; ++t) {
            row.energy += cert.mu[t] * sol.policy.u[t][i];
            row.uplift += cert.rho_on[i][t] * sol.commitments.on[i][t];
            if (!sol.commitments.ru.empty())
                row.uplift += cert.rho_ru[i][t] * sol.commitments.ru[i][t] +
                              cert.rho_rd[i][t] * sol.commitments.rd[i][t];
            row.uncertainty += dot(cert.theta[t], sol.policy.V[t][i]) +
                               dot(cert.theta_bar[t], sol.policy.Z[t][i]);
        }
        row.uplift -= cert.delta_up[i][0] * ramp_init_rent(g, T);
        gt.rows.push_back(std::move(row));
    }
    double sum_f = f.grand_total();
    double tol = cert.approximate ? 1e-4 : 1e-6;
    for (int i = 0; i < inst.num_generators(); ++i) {
        double fi = f.rows[i].total(), gi = gt.rows[i].total();
        if (std::abs(fi - gi) > tol * (1.0 + std::abs(fi)))
            throw InternalConsistencyError("worst-case settlement mismatch for " +
                                           inst.generators[i].id + ": pay-as-bid " +
                                           std::to_string(fi) + " vs priced " +
                                           std::to_string(gi));
    }
    if (std::abs(sum_f - sol.objective) > tol * (1.0 + std::abs(sol.objective)))
        throw InternalConsistencyError("worst-case settlement total " + std::to_string(sum_f) +
                                       " does not meet the objective " +
                                       std::to_string(sol.objective));
    return {std::move(f), std::move(gt)};
}

PaymentTable deterministic_marginal(const UCInstance& inst) {
    UCInstance det = inst;
    std::fill(det.uncertainty.gamma_q.begin(), det.uncertainty.gamma_q.end(), 0.0);
    std::fill(det.uncertainty.delta_p.begin(), det.uncertainty.delta_p.end(), 0.0);
    auto [sol, cert] = solve_aro(det);
    PaymentTable table = adaptive_uniform_day_ahead(sol, cert, det);
    table.scheme = "marginal";
    return table;
}

// ---------------------------------------------------------------------------
// Convex hull pricing by schedule enumeration.

namespace {

struct Schedule {
    std::vector<int> on, ru, rd;
    double commit_cost = 0.0;
    std::vector<std::vector<double>> vertices;  // dispatch extreme points
};

// Enumerates the vertices of {p : rows} in R^T by basis enumeration.
std::vector<std::vector<double>> polytope_vertices(
    const std::vector<std::pair<std::vector<double>, double>>& rows, int T) {
    std::vector<std::vector<double>> verts;
    const int m = static_cast<int>(rows.size());
    std::vector<int> idx(T);
    auto feasible = [&](const std::vector<double>& p) {
        for (const auto& [a, b] : rows) {
            double act = 0.0;
            for (int t = 0; t < T; ++t) act += a[t] * p[t];
            if (act > b + 1e-7) return false;
        }
        return true;
    };
    std::vector<int> comb(T);
    for (int i = 0; i < T; ++i) comb[i] = i;
    auto advance = [&]() {
        int i = T - 1;
        while (i >= 0 && comb[i] == m - T + i) --i;
        if (i < 0) return false;
        ++comb[i];
        for (int k = i + 1; k < T; ++k) comb[k] = comb[k - 1] + 1;
        return true;
    };
    if (m < T) return verts;
    do {
        Eigen::MatrixXd A(T, T);
        Eigen::VectorXd b(T);
        for (int r = 0; r < T; ++r) {
            for (int t = 0; t < T; ++t) A(r, t) = rows[comb[r]].first[t];
            b(r) = rows[comb[r]].second;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd p = lu.solve(b);
        std::vector<double> pv(p.data(), p.data() + T);
        if (!feasible(pv)) continue;
        bool dup = false;
        for (const auto& v : verts) {
            double d = 0.0;
            for (int t = 0; t < T; ++t) d = std::max(d, std::abs(v[t] - pv[t]));
            if (d < 1e-7) { dup = true; break; }
        }
        if (!dup) verts.push_back(std::move(pv));
    } while (advance());
    return verts;
}

std::vector<Schedule> enumerate_schedules(const GeneratorSpec& g, int T) {
    std::vector<Schedule> out;
    for (long mask = 0; mask < (1L << T); ++mask) {
        Schedule s;
        s.on.resize(T);
        s.ru.assign(T, 0);
        s.rd.assign(T, 0);
        int prev = g.initial_on ? 1 : 0;
        bool ok = true;
        for (int t = 0; t < T; ++t) {
            s.on[t] = (mask >> t) & 1;
            s.ru[t] = std::max(s.on[t] - prev, 0);
            s.rd[t] = std::max(prev - s.on[t], 0);
            prev = s.on[t];
        }
        // Minimum up/down times over the horizon (initial runs assumed long).
        for (int t = 0; t < T && ok; ++t) {
            if (s.ru[t])
                for (int q = t + 1; q < std::min(T, t + g.min_up); ++q)
                    if (!s.on[q]) ok = false;
            if (s.rd[t])
                for (int q = t + 1; q < std::min(T, t + g.min_down); ++q)
                    if (s.on[q]) ok = false;
        }
        if (!ok) continue;
        for (int t = 0; t < T; ++t)
            s.commit_cost += on_cost(g) * s.on[t] + g.startup_cost * s.ru[t];

        std::vector<std::pair<std::vector<double>, double>> rows;
        auto unit = [&](int t, double c) {
            std::vector<double> a(T, 0.0);
            a[t] = c;
            return a;
        };
        for (int t = 0; t < T; ++t) {
            rows.push_back({unit(t, 1.0), g.cap_max * s.on[t]});
            rows.push_back({unit(t, -1.0), -g.cap_min * s.on[t]});
            if (g.ramp_limited() && T > 1) {
                std::vector<double> a(T, 0.0);
                a[t] = 1.0;
                double rhs = g.ramp_rate * (t == 0 ? (g.initial_on ? 1.0 : 0.0) : s.on[t - 1]) +
                             g.startup_rate * s.ru[t] + (t == 0 ? g.initial_dispatch : 0.0);
                if (t > 0) a[t - 1] = -1.0;
                rows.push_back({a, rhs});
                if (t > 0) {
                    std::vector<double> d(T, 0.0);
                    d[t - 1] = 1.0;
                    d[t] = -1.0;
                    rows.push_back({d, g.ramp_rate * s.on[t] + g.shutdown_rate * s.rd[t]});
                }
            }
        }
        s.vertices = polytope_vertices(rows, T);
        if (!s.vertices.empty()) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

ConvexHullResult convex_hull_prices(const UCInstance& inst) {
    const int I = inst.num_generators(), T = inst.periods;
    if (T > 8 || I > 6)
        throw UnsupportedError("convex hull pricing is enumeration-based; instance too large");

    UCInstance det = inst;
    std::fill(det.uncertainty.gamma_q.begin(), det.uncertainty.gamma_q.end(), 0.0);
    std::fill(det.uncertainty.delta_p.begin(), det.uncertainty.delta_p.end(), 0.0);
    auto [uc_sol, uc_cert] = solve_aro(det);

    std::vector<std::vector<Schedule>> schedules(I);
    long cuts = 0;
    for (int i = 0; i < I; ++i) {
        schedules[i] = enumerate_schedules(inst.generators[i], T);
        for (const auto& s : schedules[i]) cuts += static_cast<long>(s.vertices.size());
        if (cuts > 200000)
            throw ResourceLimitError("convex hull enumeration produced too many cuts: " +
                                     std::to_string(cuts));
    }

    // max  sum_t pi_t qbar_t + sum_i w_i
    // s.t. w_i + sum_t pi_t p_t <= commit + energy cost  per (schedule, vertex)
    LpProblem lp;
    lp.sense = Sense::Maximize;
    std::vector<int> pi(T), w(I);
    for (int t = 0; t < T; ++t) pi[t] = lp.add_var(-kInf, kInf, inst.total_load(t));
    for (int i = 0; i < I; ++i) w[i] = lp.add_var(-kInf, kInf, 1.0);
    for (int i = 0; i < I; ++i) {
        double C = inst.generators[i].energy_cost;
        for (const auto& s : schedules[i])
            for (const auto& v : s.vertices) {
                LpProblem::Row row;
                row.rel = Rel::Le;
                double cost = s.commit_cost;
                for (int t = 0; t < T; ++t) cost += C * v[t];
                row.rhs = cost;
                row.coef.emplace_back(w[i], 1.0);
                for (int t = 0; t < T; ++t)
                    if (v[t] != 0.0) row.coef.emplace_back(pi[t], v[t]);
                lp.rows.push_back(std::move(row));
            }
    }
    LpSolution best = solve_lp(lp);
    if (best.status != LpStatus::Optimal)
        throw InternalConsistencyError("convex hull dual LP did not solve");

    // Lexicographically smallest optimal price vector.
    LpProblem sel = lp;
    {
        LpProblem::Row fix;
        fix.rel = Rel::Eq;
        fix.rhs = best.objective;
        for (int j = 0; j < sel.num_vars(); ++j)
            if (sel.cost[j] != 0.0) fix.coef.emplace_back(j, sel.cost[j]);
        sel.rows.push_back(std::move(fix));
    }
    sel.sense = Sense::Minimize;
    LpSolution pick = best;
    for (int t = 0; t < T; ++t) {
        std::fill(sel.cost.begin(), sel.cost.end(), 0.0);
        sel.cost[pi[t]] = 1.0;
        LpSolution s = solve_lp(sel);
        if (s.status != LpStatus::Optimal) break;
        sel.add_row(Rel::Eq, s.x[pi[t]], {{pi[t], 1.0}});
        pick = s;
    }

    ConvexHullResult res;
    res.prices.resize(T);
    for (int t = 0; t < T; ++t) res.prices[t] = pick.x[pi[t]];
    res.dual_objective = best.objective;
    res.uc_objective = uc_sol.objective;
    res.duality_gap = uc_sol.objective - best.objective;

    PaymentTable asbid = pay_as_bid_day_ahead(uc_sol, det);
    res.lost_opportunity.assign(I, 0.0);
    res.reconciliation.assign(I, 0.0);
    for (int i = 0; i < I; ++i) {
        double C = inst.generators[i].energy_cost;
        double best_profit = -kInf;
        for (const auto& s : schedules[i])
            for (const auto& v : s.vertices) {
                double profit = -s.commit_cost;
                for (int t = 0; t < T; ++t) profit += (res.prices[t] - C) * v[t];
                best_profit = std::max(best_profit, profit);
            }
        double actual = 0.0, revenue = 0.0;
        for (int t = 0; t < T; ++t) {
            revenue += res.prices[t] * uc_sol.policy.u[t][i];
            actual += (res.prices[t] - C) * uc_sol.policy.u[t][i];
        }
        actual -= on_cost(inst.generators[i]) *
                      std::accumulate(uc_sol.commitments.on[i].begin(),
                                      uc_sol.commitments.on[i].end(), 0.0) +
                  inst.generators[i].startup_cost *
                      std::accumulate(uc_sol.commitments.ru[i].begin(),
                                      uc_sol.commitments.ru[i].end(), 0.0);
        res.lost_opportunity[i] = best_profit - actual;
        res.reconciliation[i] = asbid.rows[i].total() - revenue;
    }
    return res;
}

}  // namespace aruc
