#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "circledyn/circle_map.hpp"
#include "circledyn/errors.hpp"

using namespace circledyn;

namespace {
LiftedCircleMap doubling() { return {2, PeriodicPart::standard(0.0, 0.0)}; }
LiftedCircleMap standard(double b, double omega, int d = 2) {
    return {d, PeriodicPart::standard(b, omega)};
}
}  // namespace

TEST_CASE("lift evaluation on the standard family") {
    CHECK(doubling().eval(0.25) == 0.5);
    // 2*0.25 + 0.5*sin(pi/2) = 1.0, exact through the quarter-wave kernel
    CHECK(standard(0.5, 0.0).eval(0.25) == 1.0);
    CHECK(standard(0.0, 0.5).eval(0.0) == 0.5);
}

TEST_CASE("equivariance g(x+1) = g(x) + D over a 1e4 grid") {
    for (auto m : {standard(0.5, 0.0), standard(0.3, 0.2), standard(0.1, 0.0, 3)}) {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            double x = i / 10000.0;
            worst = std::max(worst,
                             std::abs(m.eval(x + 1.0) - m.eval(x) - m.degree()));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("iterate basics and additivity") {
    CHECK(doubling().iterate(0.3, 3) == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(standard(0.5, 0.0).iterate(1.7, 0) == 1.7);
    CHECK(standard(0.5, 0.0).iterate(0.0, 5) == 0.0);  // sin(0) = 0 fixes the origin

    auto m = standard(0.5, 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        double x = u(rng);
        int a = trial % 7, b = 40 - a - trial % 11;
        double lhs = m.iterate(x, a + b);
        double rhs = m.iterate(m.iterate(x, a), b);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("iterate reports integer-part overflow") {
    CHECK_THROWS_AS(doubling().iterate(0.3, 100), NumericError);
}

TEST_CASE("sup_norm_phi per kind") {
    CHECK(sup_norm_phi(PeriodicPart::standard(0.5, 0.0)) == 0.5);
    CHECK(sup_norm_phi(PeriodicPart::standard(0.3, 0.2)) == 0.5);
    auto pwl = PeriodicPart::piecewise_linear(
        {{0.0, 0.0}, {0.33, 1.2}, {0.66, -0.8}, {1.0, 0.0}});
    CHECK(sup_norm_phi(pwl) == 1.2);

    SUBCASE("grid sup never exceeds the reported bound") {
        std::vector<double> samples(32);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] = std::cos(2.0 * i) * 0.7;
        auto tab = PeriodicPart::tabulated(samples);
        for (const auto& p : {PeriodicPart::standard(0.4, -0.1), pwl, tab}) {
            double grid_sup = 0.0;
            for (int i = 0; i < 20000; ++i)
                grid_sup = std::max(grid_sup, std::abs(p(i / 20000.0)));
            CHECK(grid_sup <= sup_norm_phi(p) + 1e-15);
        }
    }
}

TEST_CASE("degree_check") {
    CHECK(doubling().degree_check(64) == 2);
    CHECK(standard(0.5, 0.3).degree_check(64) == 2);
    CHECK(standard(0.1, 0.0, 3).degree_check(64) == 3);
}

TEST_CASE("conjugate_by_rotation") {
    SUBCASE("c = 0 is the identity") {
        auto m = standard(0.4, 0.1);
        auto r = m.conjugate_by_rotation(0.0);
        for (int i = 0; i <= 50; ++i) {
            double x = i / 50.0;
            CHECK(r.eval(x) == m.eval(x));
        }
    }
    SUBCASE("doubling rotated by 1/4 becomes 2x + 1/4") {
        auto r = doubling().conjugate_by_rotation(0.25);
        for (int i = 0; i <= 50; ++i) {
            double x = i / 50.0;
            CHECK(r.eval(x) == doctest::Approx(2.0 * x + 0.25).epsilon(1e-15));
        }
        CHECK(r.degree() == 2);
        CHECK(r.rotation_offset() == 0.25);
    }
    SUBCASE("round trip c then -c reproduces values to 1e-12 on a 1e4 grid") {
        auto m = standard(0.5, 0.2);
        auto rt = m.conjugate_by_rotation(0.31).conjugate_by_rotation(-0.31);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            double x = i / 10000.0;
            worst = std::max(worst, std::abs(rt.eval(x) - m.eval(x)));
        }
        CHECK(worst <= 1e-12);
        CHECK(rt.rotation_offset() == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("phi_sup_norm tracks the effective periodic part") {
        auto r = standard(0.5, 0.2).conjugate_by_rotation(0.1);
        CHECK(r.phi_sup_norm() == doctest::Approx(std::abs(0.2 + 0.1) + 0.5));
        double grid_sup = 0.0;
        for (int i = 0; i < 10000; ++i)
            grid_sup = std::max(grid_sup, std::abs(r.phi_eval(i / 10000.0)));
        CHECK(grid_sup <= r.phi_sup_norm() + 1e-15);
    }
}

TEST_CASE("strictly_increasing matches the derivative sign threshold") {
    // g' = 2 + 2*pi*b*cos(2*pi*x) attains negatives exactly when b > 1/pi
    CHECK(standard(0.30, 0.0).strictly_increasing());
    CHECK(!standard(0.35, 0.0).strictly_increasing());
    CHECK(standard(0.0, 0.9).strictly_increasing());
}

TEST_CASE("turning points of the standard family") {
    auto tp = standard(0.5, 0.0).turning_points();
    REQUIRE(tp.size() == 2);
    // roots of 2 + pi*cos(2*pi*x)
    double x1 = std::acos(-2.0 / std::numbers::pi) / (2.0 * std::numbers::pi);
    CHECK(tp[0] == doctest::Approx(x1).epsilon(1e-12));
    CHECK(tp[1] == doctest::Approx(1.0 - x1).epsilon(1e-12));
    CHECK(standard(0.3, 0.0).turning_points().empty());
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(LiftedCircleMap(1, PeriodicPart::standard(0, 0)), SpecError);
    CHECK_THROWS_AS(PeriodicPart::piecewise_linear({{0.0, 0.0}, {1.0, 0.5}}), SpecError);
    CHECK_THROWS_AS(PeriodicPart::piecewise_linear({{0.1, 0.0}, {1.0, 0.0}}), SpecError);
    CHECK_THROWS_AS(
        PeriodicPart::piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {0.4, 0.5}, {1.0, 0.0}}),
        SpecError);
    CHECK_THROWS_AS(PeriodicPart::tabulated({0.0, 1.0, 2.0}), SpecError);
}
