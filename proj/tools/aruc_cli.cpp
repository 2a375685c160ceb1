// Command-line front end: solve, price, sweep, verify and compare over
// unit-commitment instance documents.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "aruc/errors.hpp"
#include "aruc/intraday.hpp"
#include "aruc/model.hpp"
#include "aruc/pricing.hpp"
#include "aruc/robust.hpp"
#include "aruc/verify.hpp"

using namespace aruc;
using nlohmann::json;

namespace {

struct Options {
    std::string builtin, file;
    std::string norm;
    std::vector<double> gamma_q, delta_p;
    std::string format = "table";
    std::string out;
    std::string scheme = "payasbid";
    int grid = 21;
    std::uint64_t seed = 0;
    double tol = 1e-6;
};

void add_common(CLI::App* cmd, Options& opt, bool with_format = true) {
    auto* b = cmd->add_option("--builtin", opt.builtin, "built-in instance name");
    auto* f = cmd->add_option("--file", opt.file, "instance document path");
    b->excludes(f);
    cmd->add_option("--norm", opt.norm, "override the uncertainty norm (L1|L2|Linf)");
    cmd->add_option("--gamma-q", opt.gamma_q, "override the load budget (scalar or per period)")
        ->delimiter(',');
    cmd->add_option("--delta-p", opt.delta_p,
                    "override the capacity budget (scalar or per period)")
        ->delimiter(',');
    cmd->add_option("--seed", opt.seed, "seed for sampling checks");
    cmd->add_option("--tol", opt.tol, "tolerance for the ellipsoidal (L2) solver");
    if (with_format)
        cmd->add_option("--format", opt.format, "output format: table, csv or json-like")
            ->check(CLI::IsMember({"table", "csv", "json-like"}));
    cmd->add_option("--out", opt.out, "write the report to this path instead of stdout");
}

UCInstance load(const Options& opt) {
    if (opt.builtin.empty() && opt.file.empty())
        throw LookupError("choose an instance with --builtin or --file");
    UCInstance inst = opt.builtin.empty() ? load_instance_file(opt.file)
                                          : builtin_instance(opt.builtin);
    if (!opt.norm.empty()) inst.uncertainty.norm_order = parse_norm_order(opt.norm);
    auto spread = [&](const std::vector<double>& src, std::vector<double>& dst,
                      const char* name) {
        if (src.empty()) return;
        if (src.size() == 1)
            dst.assign(inst.periods, src[0]);
        else if (static_cast<int>(src.size()) == inst.periods)
            dst = src;
        else
            throw ValidationError(std::string(name) +
                                  " override must be scalar or one value per period");
    };
    spread(opt.gamma_q, inst.uncertainty.gamma_q, "--gamma-q");
    spread(opt.delta_p, inst.uncertainty.delta_p, "--delta-p");
    inst.validate();
    return inst;
}

std::pair<AroSolution, DualCertificate> solve_any(const UCInstance& inst, double tol) {
    if (inst.uncertainty.load_set_order() == NormOrder::Two)
        return ellipsoidal_outer_solve(inst, tol);
    return solve_aro(inst);
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw ValidationError("cannot write to '" + opt.out + "'");
    f << text;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(6);
    // Avoid the negative-zero artifact so output is byte-stable.
    if (v == 0.0) v = 0.0;
    s << v;
    return s.str();
}

std::string solve_report(const UCInstance& inst, const AroSolution& sol,
                         const DualCertificate& cert, const std::string& format) {
    const int I = inst.num_generators(), J = inst.num_nodes(), T = inst.periods;
    if (format == "json-like") {
        json j;
        j["objective"] = sol.objective;
        j["worst_case_dispatch_cost"] = sol.eta;
        j["mu"] = cert.mu;
        j["approximate_certificate"] = cert.approximate;
        for (int i = 0; i < I; ++i) {
            json gi;
            gi["id"] = inst.generators[i].id;
            gi["on"] = sol.commitments.on[i];
            json u = json::array(), V = json::array(), Z = json::array();
            for (int t = 0; t < T; ++t) {
                u.push_back(sol.policy.u[t][i]);
                V.push_back(sol.policy.V[t][i]);
                Z.push_back(sol.policy.Z[t][i]);
            }
            gi["u"] = u;
            gi["V"] = V;
            gi["Z"] = Z;
            j["generators"].push_back(gi);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "objective " << fmt(sol.objective) << "\n";
    out << "worst-case dispatch cost " << fmt(sol.eta) << "\n";
    out << "mu";
    for (int t = 0; t < T; ++t) out << ' ' << fmt(cert.mu[t]);
    out << "\n";
    if (cert.approximate) out << "certificate: cutting-plane approximation\n";
    for (int i = 0; i < I; ++i) {
        out << inst.generators[i].id << " on";
        for (int t = 0; t < T; ++t) out << ' ' << static_cast<int>(sol.commitments.on[i][t]);
        out << " u";
        for (int t = 0; t < T; ++t) out << ' ' << fmt(sol.policy.u[t][i]);
        out << "\n";
        for (int t = 0; t < T; ++t) {
            out << "  V[t" << t + 1 << "]";
            for (int j = 0; j < J; ++j) out << ' ' << fmt(sol.policy.V[t][i][j]);
            out << "  Z[t" << t + 1 << "]";
            for (int k = 0; k < I; ++k) out << ' ' << fmt(sol.policy.Z[t][i][k]);
            out << "\n";
        }
    }
    return out.str();
}

std::string payments_report(const PaymentTable& table, const std::string& format) {
    if (format == "csv") return table.to_csv();
    if (format == "json-like") {
        json j;
        j["scheme"] = table.scheme;
        for (const auto& r : table.rows)
            j["rows"].push_back({{"generator", r.generator},
                                 {"commitment", r.commitment},
                                 {"energy", r.energy},
                                 {"uncertainty", r.uncertainty},
                                 {"uplift", r.uplift},
                                 {"total", r.total()}});
        j["grand_total"] = table.grand_total();
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "scheme " << table.scheme << "\n";
    out << "generator commitment energy uncertainty uplift total\n";
    for (const auto& r : table.rows)
        out << r.generator << ' ' << fmt(r.commitment) << ' ' << fmt(r.energy) << ' '
            << fmt(r.uncertainty) << ' ' << fmt(r.uplift) << ' ' << fmt(r.total()) << "\n";
    out << "grand_total " << fmt(table.grand_total()) << "\n";
    return out.str();
}

int run_solve(const Options& opt) {
    UCInstance inst = load(opt);
    auto [sol, cert] = solve_any(inst, opt.tol);
    emit(opt, solve_report(inst, sol, cert, opt.format));
    return 0;
}

int run_price(const Options& opt) {
    UCInstance inst = load(opt);
    if (opt.scheme == "marginal") {
        emit(opt, payments_report(deterministic_marginal(inst), opt.format));
        return 0;
    }
    if (opt.scheme == "chull") {
        ConvexHullResult ch = convex_hull_prices(inst);
        if (opt.format == "json-like") {
            json j;
            j["prices"] = ch.prices;
            j["dual_objective"] = ch.dual_objective;
            j["uc_objective"] = ch.uc_objective;
            j["duality_gap"] = ch.duality_gap;
            j["lost_opportunity"] = ch.lost_opportunity;
            j["reconciliation"] = ch.reconciliation;
            emit(opt, j.dump(2) + "\n");
            return 0;
        }
        std::ostringstream out;
        out << "prices";
        for (double p : ch.prices) out << ' ' << fmt(p);
        out << "\ndual_objective " << fmt(ch.dual_objective) << "\nuc_objective "
            << fmt(ch.uc_objective) << "\nduality_gap " << fmt(ch.duality_gap) << "\n";
        for (std::size_t i = 0; i < ch.lost_opportunity.size(); ++i)
            out << "generator " << i + 1 << " lost_opportunity " << fmt(ch.lost_opportunity[i])
                << " reconciliation " << fmt(ch.reconciliation[i]) << "\n";
        emit(opt, out.str());
        return 0;
    }
    auto [sol, cert] = solve_any(inst, opt.tol);
    PaymentTable table = opt.scheme == "uniform" ? adaptive_uniform_day_ahead(sol, cert, inst)
                                                 : pay_as_bid_day_ahead(sol, inst);
    emit(opt, payments_report(table, opt.format));
    return 0;
}

int run_sweep(const Options& opt) {
    UCInstance inst = load(opt);
    auto [sol, cert] = solve_any(inst, opt.tol);
    auto sweep = realization_sweep(inst, sol, opt.grid);
    if (opt.format == "json-like") {
        json j = json::array();
        for (const auto& r : sweep)
            j.push_back({{"total_residual_mw", r.realized_total},
                         {"lp_cost", r.cost},
                         {"adaptive_bound", r.adaptive_bound},
                         {"marginal_price", r.marginal_price}});
        emit(opt, j.dump(2) + "\n");
    } else {
        emit(opt, sweep_to_csv(sweep));
    }
    return 0;
}

int run_verify(const Options& opt) {
    UCInstance inst = load(opt);
    VerificationReport rep = verify_instance(inst, opt.seed);
    std::ostringstream out;
    for (const auto& c : rep.checks)
        out << (c.pass ? "PASS" : "FAIL") << ' ' << c.name
            << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    out << (rep.all_pass() ? "all checks passed\n" : "checks failed\n");
    emit(opt, out.str());
    return rep.all_pass() ? 0 : 3;
}

int run_compare(const Options& opt) {
    UCInstance inst = load(opt);
    UCInstance det = inst;
    std::fill(det.uncertainty.gamma_q.begin(), det.uncertainty.gamma_q.end(), 0.0);
    std::fill(det.uncertainty.delta_p.begin(), det.uncertainty.delta_p.end(), 0.0);
    auto [dsol, dcert] = solve_aro(det);
    PaymentTable marg = deterministic_marginal(inst);
    auto [sol, cert] = solve_any(inst, opt.tol);
    PaymentTable bid = pay_as_bid_day_ahead(sol, inst);

    std::ostringstream out;
    out << "deterministic objective " << fmt(dsol.objective) << "\n";
    out << "robust objective " << fmt(sol.objective) << "\n";
    out << "generator deterministic_marginal robust_payasbid";
    bool chull_ok = true;
    ConvexHullResult ch;
    try {
        ch = convex_hull_prices(inst);
    } catch (const UnsupportedError&) {
        chull_ok = false;
    }
    if (chull_ok) out << " chull_lost_opportunity";
    out << "\n";
    for (int i = 0; i < inst.num_generators(); ++i) {
        out << inst.generators[i].id << ' ' << fmt(marg.rows[i].total()) << ' '
            << fmt(bid.rows[i].total());
        if (chull_ok) out << ' ' << fmt(ch.lost_opportunity[i]);
        out << "\n";
    }
    out << "deterministic grand total " << fmt(marg.grand_total()) << "\n";
    out << "robust grand total " << fmt(bid.grand_total()) << "\n";
    if (chull_ok) {
        out << "chull prices";
        for (double p : ch.prices) out << ' ' << fmt(p);
        out << "\nchull duality gap " << fmt(ch.duality_gap) << "\n";
    }
    emit(opt, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive robust unit commitment solver and pricing engine"};
    app.require_subcommand(1);
    Options opt;

    auto* solve = app.add_subcommand("solve", "solve the robust counterpart");
    add_common(solve, opt);
    auto* price = app.add_subcommand("price", "compute a payment table");
    add_common(price, opt);
    price->add_option("--scheme", opt.scheme, "payasbid, uniform, marginal or chull")
        ->check(CLI::IsMember({"payasbid", "uniform", "marginal", "chull"}));
    auto* sweep = app.add_subcommand("sweep", "intraday dispatch sweep over realized load");
    add_common(sweep, opt);
    sweep->add_option("--grid", opt.grid, "number of sweep points")->check(CLI::Range(2, 100000));
    auto* verify = app.add_subcommand("verify", "run the invariant and theorem checks");
    add_common(verify, opt, false);
    auto* compare = app.add_subcommand("compare", "deterministic vs robust vs convex hull");
    add_common(compare, opt);

    CLI11_PARSE(app, argc, argv);
    try {
        if (solve->parsed()) return run_solve(opt);
        if (price->parsed()) return run_price(opt);
        if (sweep->parsed()) return run_sweep(opt);
        if (verify->parsed()) return run_verify(opt);
        if (compare->parsed()) return run_compare(opt);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InternalConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
