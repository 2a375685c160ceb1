#include <doctest.h>

#include <random>
#include <vector>

#include "aruc/norms.hpp"

using namespace aruc;

TEST_CASE("norm definitions") {
    std::vector<double> v{3.0, -4.0};
    CHECK(norm(v, NormOrder::One) == doctest::Approx(7.0));
    CHECK(norm(v, NormOrder::Two) == doctest::Approx(5.0));
    CHECK(norm(v, NormOrder::Inf) == doctest::Approx(4.0));
    CHECK(norm(std::vector<double>{0.0, 0.0}, NormOrder::Two) == 0.0);
}

TEST_CASE("dual order table and involution") {
    CHECK(dual_order(NormOrder::One) == NormOrder::Inf);
    CHECK(dual_order(NormOrder::Two) == NormOrder::Two);
    CHECK(dual_order(NormOrder::Inf) == NormOrder::One);
    for (NormOrder o : {NormOrder::One, NormOrder::Two, NormOrder::Inf})
        CHECK(dual_order(dual_order(o)) == o);
}

TEST_CASE("max_linear_over_ball closed forms") {
    auto r1 = max_linear_over_ball(std::vector<double>{3.0, 2.0}, NormOrder::One, 20.0);
    CHECK(r1.value == doctest::Approx(60.0));
    CHECK(r1.argmax == std::vector<double>{20.0, 0.0});

    auto r2 = max_linear_over_ball(std::vector<double>{3.0, -2.0}, NormOrder::Inf, 1.0);
    CHECK(r2.value == doctest::Approx(5.0));
    CHECK(r2.argmax == std::vector<double>{1.0, -1.0});

    auto r3 = max_linear_over_ball(std::vector<double>{3.0, 4.0}, NormOrder::Two, 1.0);
    CHECK(r3.value == doctest::Approx(5.0));
    CHECK(r3.argmax[0] == doctest::Approx(0.6));
    CHECK(r3.argmax[1] == doctest::Approx(0.8));

    // L1 ties resolve to the lowest index, zero vector maps to zero mass.
    auto tie = max_linear_over_ball(std::vector<double>{2.0, -2.0, 2.0}, NormOrder::One, 5.0);
    CHECK(tie.argmax == std::vector<double>{5.0, 0.0, 0.0});
    auto zero = max_linear_over_ball(std::vector<double>{0.0, 0.0}, NormOrder::Two, 3.0);
    CHECK(zero.value == 0.0);
    CHECK(zero.argmax == std::vector<double>{0.0, 0.0});
}

TEST_CASE("Hoelder tightness and homogeneity on random vectors") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        std::vector<double> c(n);
        for (auto& x : c) x = u(rng);
        double radius = std::abs(u(rng));
        for (NormOrder o : {NormOrder::One, NormOrder::Two, NormOrder::Inf}) {
            auto r = max_linear_over_ball(c, o, radius);
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += c[j] * r.argmax[j];
            CHECK(dot == doctest::Approx(r.value).epsilon(1e-9));
            CHECK(norm(r.argmax, o) <= radius + 1e-9);
            auto r2 = max_linear_over_ball(c, o, 2.0 * radius);
            CHECK(r2.value == doctest::Approx(2.0 * r.value).epsilon(1e-9));
        }
    }
}
