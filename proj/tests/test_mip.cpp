#include <doctest.h>

#include <random>

#include "aruc/errors.hpp"

#include "aruc/mip.hpp"
#include "oracles.hpp"

using namespace aruc;

namespace {

// Deterministic single-period UC MILP: commit + dispatch, fixed load.
MipProblem uc_milp(const std::vector<double>& F, const std::vector<double>& C,
                   const std::vector<double>& cap, double load) {
    MipProblem mp;
    int n = static_cast<int>(F.size());
    std::vector<int> x(n), p(n);
    for (int i = 0; i < n; ++i) x[i] = mp.lp.add_var(0.0, 1.0, F[i]);
    for (int i = 0; i < n; ++i) p[i] = mp.lp.add_var(0.0, kInf, C[i]);
    std::vector<std::pair<int, double>> bal;
    for (int i = 0; i < n; ++i) bal.emplace_back(p[i], 1.0);
    mp.lp.add_row(Rel::Eq, load, std::move(bal));
    for (int i = 0; i < n; ++i) mp.lp.add_row(Rel::Le, 0.0, {{p[i], 1.0}, {x[i], -cap[i]}});
    mp.binaries = x;
    return mp;
}

}  // namespace

TEST_CASE("deterministic Scarf MILP") {
    std::vector<double> F{53, 53, 30, 30, 30, 30, 30, 30};
    std::vector<double> C{3, 3, 2, 2, 2, 2, 2, 2};
    std::vector<double> cap{16, 16, 7, 7, 7, 7, 7, 7};
    MipProblem mp = uc_milp(F, C, cap, 40.0);
    MipSolution s = solve_milp(mp);
    REQUIRE(s.status == MipStatus::Optimal);
    CHECK(s.objective == doctest::Approx(260.0));
    std::vector<double> commits(s.x.begin(), s.x.begin() + 8);
    CHECK(commits == std::vector<double>{0, 0, 1, 1, 1, 1, 1, 1});

    // Full enumeration over all 2^8 commitment patterns agrees.
    auto enumd = oracle::enumerate_milp(mp);
    REQUIRE(enumd.feasible);
    CHECK(enumd.objective == doctest::Approx(s.objective).epsilon(1e-9));
}

TEST_CASE("infeasible commitment tree") {
    MipProblem mp = uc_milp({10.0}, {1.0}, {5.0}, 9.0);
    MipSolution s = solve_milp(mp);
    CHECK(s.status == MipStatus::Infeasible);
}

TEST_CASE("random small MILPs match exhaustive enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.5, 10.0);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<double> F(n), C(n), cap(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            F[i] = std::round(u(rng) * 4) / 4;
            C[i] = std::round(u(rng) * 4) / 4;
            cap[i] = std::round(u(rng) * 4) / 4;
            total += cap[i];
        }
        double load = total * 0.7;
        MipProblem mp = uc_milp(F, C, cap, load);
        MipSolution s = solve_milp(mp);
        auto ref = oracle::enumerate_milp(mp);
        REQUIRE(s.status == MipStatus::Optimal);
        REQUIRE(ref.feasible);
        CHECK(s.objective == doctest::Approx(ref.objective).epsilon(1e-9));
        // The engine's pattern is one of the enumeration's tied optima.
        std::vector<int> mine;
        for (int j : mp.binaries) mine.push_back(static_cast<int>(std::lround(s.x[j])));
        bool listed = false;
        for (const auto& pat : ref.optimal_patterns) listed |= (pat == mine);
        CHECK(listed);
        // Incumbent binaries are integral within tolerance.
        for (int j : mp.binaries)
            CHECK(std::abs(s.x[j] - std::round(s.x[j])) <= 1e-6);
    }
}

TEST_CASE("binary index validation") {
    MipProblem mp;
    mp.lp.add_var(0.0, 1.0, 1.0);
    mp.binaries = {2};
    CHECK_THROWS_AS(solve_milp(mp), DimensionError);
}
