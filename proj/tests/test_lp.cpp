#include <doctest.h>

#include <cmath>
#include <random>

#include "aruc/errors.hpp"
#include "aruc/lp.hpp"
#include "oracles.hpp"

using namespace aruc;

namespace {

LpProblem random_boxed_lp(std::mt19937_64& rng, int m, int n) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_real_distribution<double> rhs(-8.0, 8.0);
    LpProblem p;
    for (int j = 0; j < n; ++j) {
        double lo = -std::abs(coef(rng)) * 0.5;
        double hi = std::abs(coef(rng)) * 0.8 + 0.1;
        p.add_var(lo, hi, coef(rng));
    }
    for (int r = 0; r < m; ++r) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j) {
            double a = coef(rng);
            if (std::abs(a) > 1.0) row.emplace_back(j, std::round(a));
        }
        if (row.empty()) row.emplace_back(static_cast<int>(rng() % n), 1.0);
        Rel rel = (r % 3 == 0) ? Rel::Eq : (r % 3 == 1 ? Rel::Le : Rel::Ge);
        p.add_row(rel, std::round(rhs(rng)), std::move(row));
    }
    return p;
}

double row_activity(const LpProblem& p, int r, const std::vector<double>& x) {
    double a = 0.0;
    for (auto [j, c] : p.rows[r].coef) a += c * x[j];
    return a;
}

}  // namespace

TEST_CASE("one-variable LP with a binding lower-bound row") {
    LpProblem p;
    p.add_var(0.0, kInf, 1.0);
    p.add_row(Rel::Ge, 1.0, {{0, 1.0}});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(1.0));
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatch raises a construction error") {
    LpProblem p;
    p.add_var(0.0, 1.0, 1.0);
    p.add_row(Rel::Le, 1.0, {{3, 1.0}});
    CHECK_THROWS_AS(solve_lp(p), DimensionError);
}

TEST_CASE("infeasible LPs carry a Farkas certificate") {
    LpProblem p;
    p.add_var(0.0, 1.0, 1.0);
    p.add_var(0.0, 1.0, 1.0);
    p.add_row(Rel::Ge, 3.0, {{0, 1.0}, {1, 1.0}});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Infeasible);
    REQUIRE(s.farkas_ray.size() == 1);
    // Multiplier combination must prove b'y exceeds what bounds can supply.
    double y = s.farkas_ray[0];
    CHECK(y > 0.0);                       // Ge row: positive multiplier
    CHECK(3.0 * y > (1.0 + 1.0) * y + 1e-9);
}

TEST_CASE("unbounded LPs carry a primal ray") {
    LpProblem p;
    p.add_var(0.0, kInf, -1.0);
    p.add_var(0.0, kInf, 0.0);
    p.add_row(Rel::Le, 5.0, {{1, 1.0}});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Unbounded);
    REQUIRE(s.unbounded_ray.size() == 2);
    double c_dot = -1.0 * s.unbounded_ray[0];
    CHECK(c_dot < -1e-9);
    CHECK(std::abs(s.unbounded_ray[1]) <= 1e-9);
}

TEST_CASE("random boxed LPs match the vertex enumeration oracle") {
    std::mt19937_64 rng(42);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        LpProblem p = random_boxed_lp(rng, 4, 6);
        auto best = oracle::enumerate_vertices(p);
        LpSolution s = solve_lp(p);
        if (!best.feasible) {
            CHECK(s.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.objective == doctest::Approx(best.objective).epsilon(1e-8));
        ++solved;
        // Strong duality: c'x == y'b + sum of bound terms via reduced costs.
        double dual_val = 0.0;
        for (int r = 0; r < p.num_rows(); ++r) dual_val += s.row_dual[r] * p.rows[r].rhs;
        for (int j = 0; j < p.num_vars(); ++j) {
            double rc = s.reduced_cost[j];
            if (std::abs(rc) > 1e-9) dual_val += rc * s.x[j];
        }
        CHECK(dual_val == doctest::Approx(s.objective).epsilon(1e-7));
        // Primal feasibility within 1e-7.
        for (int r = 0; r < p.num_rows(); ++r) {
            double act = row_activity(p, r, s.x);
            switch (p.rows[r].rel) {
                case Rel::Le: CHECK(act <= p.rows[r].rhs + 1e-7); break;
                case Rel::Ge: CHECK(act >= p.rows[r].rhs - 1e-7); break;
                case Rel::Eq: CHECK(act == doctest::Approx(p.rows[r].rhs).epsilon(1e-7)); break;
            }
        }
    }
    CHECK(solved >= 10);  // the generator must produce enough feasible cases
}

TEST_CASE("explicit dual problem attains the primal value") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        LpProblem p = random_boxed_lp(rng, 3, 5);
        LpSolution sp = solve_lp(p);
        if (sp.status != LpStatus::Optimal) continue;
        LpProblem d = dual_problem(p);
        LpSolution sd = solve_lp(d);
        REQUIRE(sd.status == LpStatus::Optimal);
        CHECK(sd.objective == doctest::Approx(sp.objective).epsilon(1e-7));
    }
}

TEST_CASE("objective scaling scales duals and keeps the argmin") {
    std::mt19937_64 rng(3);
    LpProblem p = random_boxed_lp(rng, 3, 5);
    LpSolution s1 = solve_lp(p);
    if (s1.status != LpStatus::Optimal) return;
    LpProblem q = p;
    for (auto& c : q.cost) c *= 4.0;
    LpSolution s2 = solve_lp(q);
    REQUIRE(s2.status == LpStatus::Optimal);
    CHECK(s2.objective == doctest::Approx(4.0 * s1.objective).epsilon(1e-8));
    for (int r = 0; r < p.num_rows(); ++r)
        CHECK(s2.row_dual[r] == doctest::Approx(4.0 * s1.row_dual[r]).epsilon(1e-6));
    // Re-fixing the scaled argmin in the original problem reproduces it.
    LpSolution refix = solve_lp(p, s2.x, s2.x);
    REQUIRE(refix.status == LpStatus::Optimal);
    CHECK(refix.objective == doctest::Approx(s1.objective).epsilon(1e-7));
}

TEST_CASE("complementary slackness report") {
    // All-zero LP passes with zero violation.
    LpProblem z;
    z.add_var(0.0, 1.0, 0.0);
    LpSolution sz = solve_lp(z);
    auto rep0 = check_complementary_slackness(z, sz);
    CHECK(rep0.pass);
    CHECK(rep0.max_violation == doctest::Approx(0.0));

    LpProblem p;
    p.add_var(0.0, kInf, 1.0);
    p.add_var(0.0, kInf, 2.0);
    p.add_row(Rel::Ge, 2.0, {{0, 1.0}, {1, 1.0}});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    auto rep = check_complementary_slackness(p, s);
    CHECK(rep.pass);

    // Perturbing the dual on a binding row must fail the audit.
    LpSolution bad = s;
    bad.row_dual[0] += 0.1;
    bad.reduced_cost[0] -= 0.1;  // keep rc consistent with c - A'y
    bad.reduced_cost[1] -= 0.1;
    auto rep2 = check_complementary_slackness(p, bad);
    CHECK_FALSE(rep2.pass);

    LpSolution not_opt = s;
    not_opt.status = LpStatus::Infeasible;
    CHECK_THROWS_AS(check_complementary_slackness(p, not_opt), StateError);
}

TEST_CASE("pivot limit raises a resource error") {
    // A tiny problem with an absurdly low implied limit cannot be built, so
    // check the guard indirectly: the limit is 100*(rows+cols) and a normal
    // solve stays far below it.
    std::mt19937_64 rng(11);
    LpProblem p = random_boxed_lp(rng, 4, 6);
    LpSolution s = solve_lp(p);
    CHECK(s.iterations < 100 * (4 + 6));
}
