#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "circledyn/circle_map.hpp"
#include "circledyn/kernels.hpp"

using namespace circledyn;
namespace k = circledyn::kernels;

namespace {

// reference: sin(2*pi*x) through 80-bit arithmetic
double sin2pi_ref(double x) {
    long double two_pi = 6.283185307179586476925286766559L;
    return static_cast<double>(sinl(two_pi * static_cast<long double>(x)));
}

std::vector<double> random_points(std::size_t n, double lo, double hi,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = u(rng);
    return out;
}

k::LiftParams params_for(const LiftedCircleMap& m) { return m.kernel_params(); }

const LiftedCircleMap kStandard{2, PeriodicPart::standard(0.5, 0.125)};
const LiftedCircleMap kRotated{2, PeriodicPart::standard(0.3, -0.2), 0.37};
const LiftedCircleMap kPwl{
    2, PeriodicPart::piecewise_linear(
           {{0.0, 0.0}, {0.25, 0.5}, {0.5, -1.25}, {0.75, -0.5}, {1.0, 0.0}})};
const LiftedCircleMap kTable = [] {
    std::vector<double> s(64);
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = 0.4 * k::sin2pi(static_cast<double>(i) / 64.0) +
               0.1 * k::sin2pi(3.0 * static_cast<double>(i) / 64.0);
    return LiftedCircleMap{3, PeriodicPart::tabulated(std::move(s))};
}();

}  // namespace

TEST_CASE("sin2pi matches long-double reference") {
    auto xs = random_points(20000, -8.0, 8.0, 1);
    double worst = 0.0;
    for (double x : xs) worst = std::max(worst, std::abs(k::sin2pi(x) - sin2pi_ref(x)));
    CHECK(worst <= 1e-15);
}

TEST_CASE("sin2pi is exact at quarter points") {
    CHECK(k::sin2pi(0.0) == 0.0);
    CHECK(k::sin2pi(0.25) == 1.0);
    CHECK(k::sin2pi(0.5) == 0.0);
    CHECK(k::sin2pi(0.75) == -1.0);
    CHECK(k::sin2pi(1.0) == 0.0);
    CHECK(k::sin2pi(-0.25) == -1.0);
    CHECK(k::sin2pi(5.25) == 1.0);
}

TEST_CASE("sin2pi periodicity is bit-exact on exactly shifted inputs") {
    // y - 1 is exact for y in [1,2) (Sterbenz), and x + m is exact on a
    // dyadic lattice; on such inputs the quarter-period reduction makes
    // periodicity an identity, not an approximation.
    auto ys = random_points(5000, 1.0, 2.0, 2);
    for (double y : ys) CHECK(k::sin2pi(y - 1.0) == k::sin2pi(y));
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5000; ++t) {
        double x = std::ldexp(static_cast<double>(rng() % (1u << 20)), -20);
        CHECK(k::sin2pi(x + 1.0) == k::sin2pi(x));
        CHECK(k::sin2pi(x + 7.0) == k::sin2pi(x));
        CHECK(k::sin2pi(-x) == -k::sin2pi(x));
    }
    // generic inputs: the shift itself rounds by up to ulp(9)/2, which the
    // derivative 2*pi*cos scales to ~5.6e-15
    for (double x : random_points(2000, -2.0, 2.0, 5))
        CHECK(std::abs(k::sin2pi(x + 7.0) - k::sin2pi(x)) <= 6e-15);
}

TEST_CASE("simd lane is bit-identical to the scalar reference") {
    const auto* simd = k::simd_kernels_if_available();
    if (simd == nullptr) return;  // nothing to compare on this host
    const auto& scalar = k::scalar_kernels();

    SUBCASE("sin2pi") {
        for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
            auto xs = random_points(n, -20.0, 20.0, 10 + n);
            std::vector<double> a(n), b(n);
            scalar.sin2pi_batch(xs.data(), a.data(), n);
            simd->sin2pi_batch(xs.data(), b.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
        }
    }

    SUBCASE("phi, lift, iterate, alpha on every map kind") {
        for (const auto* m : {&kStandard, &kRotated, &kPwl, &kTable}) {
            auto p = params_for(*m);
            auto xs = random_points(517, -3.0, 4.0, 99);
            std::vector<double> a(xs.size()), b(xs.size());

            scalar.phi_batch(p, xs.data(), a.data(), xs.size());
            simd->phi_batch(p, xs.data(), b.data(), xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i] == b[i]);

            scalar.lift_batch(p, xs.data(), a.data(), xs.size());
            simd->lift_batch(p, xs.data(), b.data(), xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i] == b[i]);

            auto y1 = xs, y2 = xs;
            scalar.iterate_batch(p, y1.data(), y1.size(), 7);
            simd->iterate_batch(p, y2.data(), y2.size(), 7);
            for (std::size_t i = 0; i < xs.size(); ++i) CHECK(y1[i] == y2[i]);

            scalar.alpha_batch(p, xs.data(), a.data(), xs.size(), 40);
            simd->alpha_batch(p, xs.data(), b.data(), xs.size(), 40);
            for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("batch kernels agree with single-point evaluation") {
    for (const auto* m : {&kStandard, &kPwl, &kTable}) {
        auto p = params_for(*m);
        auto xs = random_points(257, -2.0, 3.0, 7);
        std::vector<double> out(xs.size());
        k::active_kernels().phi_batch(p, xs.data(), out.data(), xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(out[i] == k::phi_eval(p, xs[i]));
        k::active_kernels().lift_batch(p, xs.data(), out.data(), xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(out[i] == k::lift_eval(p, xs[i]));
    }
}

TEST_CASE("alpha kernel is degree-one to one ulp") {
    std::mt19937_64 rng(17);
    for (const auto* m : {&kStandard, &kPwl, &kTable}) {
        auto p = params_for(*m);
        std::vector<double> xs(400);  // dyadic lattice keeps x + 1 exact
        for (auto& x : xs) x = std::ldexp(static_cast<double>(rng() % (1u << 20)), -20);
        std::vector<double> shifted(xs.size()), a0(xs.size()), a1(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) shifted[i] = xs[i] + 1.0;
        k::active_kernels().alpha_batch(p, xs.data(), a0.data(), xs.size(), 45);
        k::active_kernels().alpha_batch(p, shifted.data(), a1.data(), xs.size(), 45);
        // the gamma series is bit-identical (same reduced orbit); only the
        // final identity-part addition can round, by at most one ulp
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(std::abs(a1[i] - (a0[i] + 1.0)) <= 1e-15);
    }
}
