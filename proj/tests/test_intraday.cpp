#include <doctest.h>

#include <cmath>

#include "aruc/errors.hpp"
#include "aruc/intraday.hpp"
#include "aruc/pricing.hpp"
#include "aruc/verify.hpp"
#include "oracles.hpp"

using namespace aruc;

TEST_CASE("intraday dispatch on the adaptive Scarf solution") {
    UCInstance inst = builtin_instance("scarf");
    auto [sol, cert] = solve_aro(inst);

    // Worst-case realization: cost hits the adaptive bound exactly.
    std::vector<double> d{20.0, 0.0, 0.0, 0.0, 0.0};
    IntradayResult at20 = intraday_dispatch(inst, sol, d);
    CHECK(at20.cost == doctest::Approx(49.5));
    CHECK(at20.adaptive_bound == doctest::Approx(49.5));

    std::vector<double> zero(5, 0.0);
    IntradayResult at0 = intraday_dispatch(inst, sol, zero);
    CHECK(at0.cost == doctest::Approx(0.0));
    CHECK(at0.adaptive_bound == doctest::Approx(0.0));

    std::vector<double> d10{10.0, 0.0, 0.0, 0.0, 0.0};
    IntradayResult at10 = intraday_dispatch(inst, sol, d10);
    CHECK(at10.cost == doctest::Approx(20.0));
    CHECK(at10.marginal_price == doctest::Approx(2.0));

    // Beyond the residual capacity the dispatch is infeasible.
    std::vector<double> huge{40.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(intraday_dispatch(inst, sol, huge), InfeasibleError);
    std::vector<double> neg{-1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(intraday_dispatch(inst, sol, neg), ValidationError);
}

TEST_CASE("realization sweep reproduces the published comparison") {
    UCInstance inst = builtin_instance("scarf");
    auto [sol, cert] = solve_aro(inst);
    auto sweep = realization_sweep(inst, sol, 21);
    REQUIRE(sweep.size() == 21);
    CHECK(sweep.front().realized_total == doctest::Approx(0.0));
    CHECK(sweep.back().realized_total == doctest::Approx(20.0));
    CHECK(sweep.back().cost == doctest::Approx(49.5));
    CHECK(sweep.back().adaptive_bound == doctest::Approx(49.5));
    double prev_cost = -1.0, prev_price = -1.0;
    for (const auto& r : sweep) {
        CHECK(r.cost <= r.adaptive_bound + 1e-6);
        CHECK(r.cost >= prev_cost - 1e-9);
        CHECK(r.marginal_price >= prev_price - 1e-9);
        prev_cost = r.cost;
        prev_price = r.marginal_price;
    }
    // Bound curve is linear in the total.
    for (std::size_t k = 0; k < sweep.size(); ++k)
        CHECK(sweep[k].adaptive_bound ==
              doctest::Approx(49.5 * sweep[k].realized_total / 20.0).epsilon(1e-9));

    auto two = realization_sweep(inst, sol, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].realized_total == doctest::Approx(0.0));
    CHECK(two[1].realized_total == doctest::Approx(20.0));
    CHECK_THROWS_AS(realization_sweep(inst, sol, 1), ValidationError);

    std::string csv = sweep_to_csv(sweep);
    CHECK(csv.find("total_residual_mw,lp_cost,adaptive_bound,marginal_price") == 0);

    UCInstance chen = builtin_instance("chen-multiperiod");
    auto [csol, ccert] = solve_aro(chen);
    std::vector<double> d(3, 0.0);
    CHECK_THROWS_AS(intraday_dispatch(chen, csol, d), UnsupportedError);
}

TEST_CASE("no generator can profit by self-scheduling") {
    for (const char* name : {"scarf", "scarf-capacity"}) {
        UCInstance inst = builtin_instance(name);
        auto [sol, cert] = solve_aro(inst);
        for (int i = 0; i < inst.num_generators(); ++i) {
            ProfitReport rep = decentralized_profit(inst, cert, sol, i, true);
            CHECK(std::abs(rep.centralized) <= 1e-6 * (1 + sol.objective));
            CHECK(rep.decentralized <= rep.centralized + 1e-6 * (1 + sol.objective));
            CHECK_FALSE(rep.self_schedule_incentive);
        }
    }
    // Off generators with a null policy row earn exactly nothing.
    UCInstance inst = builtin_instance("scarf");
    auto [sol, cert] = solve_aro(inst);
    for (int i = 0; i < 8; ++i)
        if (sol.commitments.on[i][0] < 0.5) {
            ProfitReport rep = decentralized_profit(inst, cert, sol, i, true);
            CHECK(rep.centralized == doctest::Approx(0.0));
            CHECK(rep.decentralized <= doctest::Approx(0.0).epsilon(1e-9));
        }
}

TEST_CASE("self-scheduling audit flags perturbed prices") {
    UCInstance inst = builtin_instance("scarf");
    auto [sol, cert] = solve_aro(inst);
    DualCertificate bad = cert;
    bad.mu[0] += 1.0;  // off-equilibrium price
    bool incentive = false;
    for (int i = 0; i < 8 && !incentive; ++i) {
        ProfitReport rep = decentralized_profit(inst, bad, sol, i, false);
        incentive = rep.self_schedule_incentive;
    }
    CHECK(incentive);
}

TEST_CASE("multiperiod self-scheduling audit") {
    UCInstance inst = builtin_instance("chen-multiperiod");
    auto [sol, cert] = solve_aro(inst);
    for (int i = 0; i < 2; ++i) {
        ProfitReport rep = decentralized_profit(inst, cert, sol, i, true);
        CHECK(std::abs(rep.centralized) <= 1e-6 * (1 + sol.objective));
        CHECK_FALSE(rep.self_schedule_incentive);
    }
}

TEST_CASE("verify_instance passes on the builtin instances") {
    for (const char* name : {"scarf", "scarf-capacity", "chen-multiperiod"}) {
        VerificationReport rep = verify_instance(builtin_instance(name), 0);
        for (const auto& c : rep.checks) {
            INFO(name << ": " << c.name << " " << c.detail);
            CHECK(c.pass);
        }
    }
}
