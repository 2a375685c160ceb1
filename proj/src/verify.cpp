#include "aruc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aruc/errors.hpp"
#include "aruc/intraday.hpp"
#include "aruc/lp.hpp"
#include "aruc/norms.hpp"
#include "aruc/pricing.hpp"
#include "aruc/robust.hpp"

namespace aruc {

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerificationCheck& c) { return c.pass; });
}

void VerificationReport::add(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
}

namespace {

std::string num(double v) {
    std::ostringstream out;
    out.precision(9);
    out << v;
    return out.str();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

VerificationReport verify_instance(const UCInstance& inst, std::uint64_t seed) {
    VerificationReport rep;
    inst.validate();
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    const bool l2 = inst.uncertainty.load_set_order() == NormOrder::Two;
    const double tol = l2 ? 1e-4 : 1e-6;

    AroSolution sol;
    DualCertificate cert;
    if (l2) {
        std::tie(sol, cert) = ellipsoidal_outer_solve(inst, 1e-6);
    } else {
        std::tie(sol, cert) = solve_aro(inst);
    }
    rep.add("solve", true, "objective " + num(sol.objective));

    // Deterministic reduction and monotone budgets.
    UCInstance det = inst;
    std::fill(det.uncertainty.gamma_q.begin(), det.uncertainty.gamma_q.end(), 0.0);
    std::fill(det.uncertainty.delta_p.begin(), det.uncertainty.delta_p.end(), 0.0);
    auto [dsol, dcert] = solve_aro(det);
    rep.add("robust objective dominates deterministic", sol.objective >= dsol.objective - 1e-7,
            num(dsol.objective) + " <= " + num(sol.objective));
    {
        bool mono = true;
        double prev = -kInf;
        for (int k = 0; k <= 4 && mono; ++k) {
            UCInstance scaled = inst;
            for (int t = 0; t < T; ++t) {
                scaled.uncertainty.gamma_q[t] = inst.uncertainty.gamma_q[t] * k / 4.0;
                scaled.uncertainty.delta_p[t] = 0.0;
            }
            double obj = l2 ? ellipsoidal_outer_solve(scaled, 1e-6).first.objective
                            : solve_aro(scaled).first.objective;
            mono = obj >= prev - 1e-7;
            prev = obj;
        }
        double prev_d = -kInf;
        for (int k = 0; k <= 4 && mono; ++k) {
            UCInstance scaled = inst;
            for (int t = 0; t < T; ++t)
                scaled.uncertainty.delta_p[t] = inst.uncertainty.delta_p[t] * k / 4.0;
            double obj = l2 ? ellipsoidal_outer_solve(scaled, 1e-6).first.objective
                            : solve_aro(scaled).first.objective;
            mono = obj >= prev_d - 1e-7;
            prev_d = obj;
        }
        rep.add("objective monotone in budgets", mono);
    }

    // Structural laws of the policy.
    {
        bool columns = true, usum = true;
        for (int t = 0; t < T; ++t) {
            if (inst.uncertainty.gamma_q[t] > 0.0) {
                for (int j = 0; j < J; ++j) {
                    double cs = 0.0;
                    for (int i = 0; i < I; ++i) cs += sol.policy.V[t][i][j];
                    columns = columns && std::abs(cs - 1.0) <= tol;
                }
                for (int k = 0; k < I; ++k) {
                    double cs = 0.0;
                    for (int i = 0; i < I; ++i) cs += sol.policy.Z[t][i][k];
                    columns = columns && std::abs(cs) <= tol;
                }
            }
            double su = 0.0;
            for (int i = 0; i < I; ++i) su += sol.policy.u[t][i];
            usum = usum && std::abs(su - inst.total_load(t)) <= 1e-6 * (1 + inst.total_load(t));
        }
        rep.add("decision-rule column sums", columns);
        rep.add("non-adaptive dispatch meets expected load", usum);
    }

    // Dual identities between multiplier families and norm arguments.
    {
        RobustConstraintBundle b = compute_bundle(inst, sol);
        const NormOrder dl = dual_order(inst.uncertainty.load_set_order());
        const NormOrder dc = dual_order(inst.uncertainty.capacity_set_order());
        double worst = 0.0;
        auto gap = [&](double lhs, double rhs) {
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
        };
        for (int t = 0; t < T; ++t) {
            double gm = inst.uncertainty.gamma_q[t], dp = inst.uncertainty.delta_p[t];
            gap(dot(cert.alpha[t], b.omega[t]), cert.nu * gm * norm(b.omega[t], dl));
            gap(dot(cert.alpha_bar[t], b.omega_bar[t]),
                cert.nu * dp * norm(b.omega_bar[t], dc));
            gap(dot(cert.theta[t], b.tau[t]), cert.lambda[t] * gm * norm(b.tau[t], dl));
            gap(dot(cert.theta_bar[t], b.tau_bar[t]),
                cert.lambda[t] * dp * norm(b.tau_bar[t], dc));
            for (int i = 0; i < I; ++i) {
                gap(dot(cert.beta[t][i], b.psi[t][i]),
                    cert.sigma[i][t] * gm * norm(b.psi[t][i], dl));
                gap(dot(cert.beta_bar[t][i], b.psi_bar[t][i]),
                    cert.sigma[i][t] * dp * norm(b.psi_bar[t][i], dc));
                gap(dot(cert.gamma[t][i], b.phi[t][i]),
                    cert.zeta[i][t] * gm * norm(b.phi[t][i], dl));
                gap(dot(cert.gamma_bar[t][i], b.phi_bar[t][i]),
                    cert.zeta[i][t] * dp * norm(b.phi_bar[t][i], dc));
            }
        }
        rep.add("worst-case multiplier identities", worst <= tol, "max gap " + num(worst));
    }

    // Complementary slackness audit of the restricted primal.
    if (!l2) {
        PrimalMap map;
        MipProblem phase2 = build_robust_primal(inst, map, &sol.commitments);
        LpSolution s2 = solve_lp(phase2.lp);
        auto audit = check_complementary_slackness(phase2.lp, s2);
        rep.add("complementary slackness", audit.pass, "max violation " + num(audit.max_violation));
    }

    // Theorem 1: day-ahead pay-as-bid equals adaptive uniform per generator.
    {
        PaymentTable bid = pay_as_bid_day_ahead(sol, inst);
        PaymentTable uni = adaptive_uniform_day_ahead(sol, cert, inst);
        double worst = 0.0;
        for (int i = 0; i < I; ++i)
            worst = std::max(worst, std::abs(bid.rows[i].total() - uni.rows[i].total()) /
                                        (1.0 + std::abs(bid.rows[i].total())));
        rep.add("theorem: pay-as-bid equals uniform day-ahead", worst <= tol,
                "max gap " + num(worst));
        bool rowsum = true;
        for (const auto& r : bid.rows)
            rowsum = rowsum && std::abs(r.total() - (r.commitment + r.energy + r.uncertainty +
                                                     r.uplift)) <= 1e-9;
        rep.add("payment rows add up", rowsum);
    }

    // Theorem 2: worst-case settlement closes to the objective.
    try {
        auto [f, g] = worst_case_settlement(sol, cert, inst);
        rep.add("theorem: worst-case settlement equals objective", true,
                "total " + num(f.grand_total()));
    } catch (const InternalConsistencyError& e) {
        rep.add("theorem: worst-case settlement equals objective", false, e.what());
    }

    // Theorem 3: no self-scheduling incentive.
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < I && ok; ++i) {
            try {
                ProfitReport pr = decentralized_profit(inst, cert, sol, i, true);
                ok = !pr.self_schedule_incentive;
            } catch (const InternalConsistencyError& e) {
                ok = false;
                detail = e.what();
            }
        }
        rep.add("theorem: no self-scheduling incentive", ok, detail);
    }

    // Sampled feasibility of the decision rule.
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        bool ok = true;
        for (int s = 0; s < 1000 && ok; ++s) {
            int t = static_cast<int>(rng() % T);
            std::vector<double> d(J, 0.0), r(I, 0.0);
            double n1 = 0.0;
            for (auto& v : d) {
                v = uni(rng);
                n1 += std::abs(v);
            }
            double nl = norm(d, inst.uncertainty.load_set_order());
            double scale = nl > 0 ? std::abs(uni(rng)) * inst.uncertainty.gamma_q[t] / nl : 0.0;
            for (auto& v : d) v *= scale;
            for (auto& v : r) v = uni(rng) * inst.uncertainty.delta_p[t];
            double total = 0.0, load = inst.total_load(t);
            for (double dj : d) load += dj;
            for (int i = 0; i < I; ++i) {
                double p = sol.policy.dispatch(t, i, d, r);
                double cap =
                    (inst.generators[i].cap_max + r[i]) * sol.commitments.on[i][t];
                ok = ok && p >= -1e-6 && p <= cap + 1e-6;
                total += p;
            }
            ok = ok && total >= load - 1e-6;
        }
        rep.add("sampled decision-rule feasibility", ok, "1000 draws");
    }

    // Intraday bound checks (single-period instances only).
    if (T == 1) {
        std::mt19937_64 rng(seed + 1);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        bool bound_ok = true;
        for (int s = 0; s < 200 && bound_ok; ++s) {
            std::vector<double> d(J, 0.0);
            for (auto& v : d) v = uni(rng);
            double nl = norm(d, inst.uncertainty.load_set_order());
            double scale = nl > 0 ? uni(rng) * inst.uncertainty.gamma_q[0] / nl : 0.0;
            for (auto& v : d) v *= scale;
            IntradayResult res = intraday_dispatch(inst, sol, d);
            bound_ok = res.cost <= res.adaptive_bound + 1e-6;
        }
        rep.add("intraday cost below adaptive bound", bound_ok, "200 draws");

        RealizationVector wc = worst_case_realization(sol, inst);
        std::vector<double> dstar = wc.load_residual[0];
        bool nonneg = std::all_of(dstar.begin(), dstar.end(), [](double v) { return v >= 0.0; });
        if (nonneg) {
            IntradayResult at_worst = intraday_dispatch(inst, sol, dstar);
            rep.add("intraday cost equals bound at the worst case",
                    std::abs(at_worst.cost - at_worst.adaptive_bound) <= tol,
                    num(at_worst.cost) + " vs " + num(at_worst.adaptive_bound));
        }
        if (inst.uncertainty.gamma_q[0] > 0.0) {
            auto sweep = realization_sweep(inst, sol, 21);
            bool mono = true, under = true;
            for (std::size_t k = 0; k < sweep.size(); ++k) {
                if (k > 0) mono = mono && sweep[k].marginal_price >= sweep[k - 1].marginal_price - 1e-9;
                under = under && sweep[k].cost <= sweep[k].adaptive_bound + 1e-6;
            }
            rep.add("intraday price monotone over the sweep", mono);
            rep.add("sweep cost below bound", under);
        }
    }
    return rep;
}

}  // namespace aruc
