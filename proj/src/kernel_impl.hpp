#pragma once

// Shared kernel algorithms, templated over an op policy so the scalar and
// SIMD translation units instantiate the exact same sequence of rounded
// operations (fma, floor, nearbyint, compare/select). That sequence is what
// makes the two lanes bit-identical; the SIMD batch loops fall back to these
// scalar helpers for remainder elements.

#include "circledyn/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

namespace circledyn::kernels::detail {

// Taylor coefficients of sin(pi*f/2) = f * P(f^2) and cos(pi*f/2) = Q(f^2)
// on |f| <= 1/2, rounded to double. Truncation below 2^-53, measured max
// error ~1.5e-16 absolute over the reduced interval.
inline constexpr double kSinPoly[10] = {
    1.5707963267948966,     -0.6459640975062463,    0.07969262624616705,
    -0.004681754135318688,  0.00016044118478735983, -3.598843235212085e-06,
    5.692172921967927e-08,  -6.688035109811468e-10, 6.0669357311061955e-12,
    -4.377065467313742e-14,
};
inline constexpr double kCosPoly[10] = {
    1.0,                    -1.2337005501361697,    0.25366950790104803,
    -0.02086348076335296,   0.0009192602748394266,  -2.5202042373060607e-05,
    4.710874778818172e-07,  -6.386603083791852e-09, 6.565963114979473e-11,
    -5.294400200734623e-13,
};

// Quarter-period reduction: 4x = k + f with k integral, |f| <= 1/2, both
// exact, so sin2pi(x + 1) == sin2pi(x) holds bit-for-bit.
template <class V, class O>
inline V sin2pi_core(V x) {
    V u = x * V(4.0);  // exact: power-of-two scale
    V k = O::nearbyint_(u);
    V f = u - k;  // exact: Sterbenz
    V t = f * f;
    V s = V(kSinPoly[9]);
    V c = V(kCosPoly[9]);
    for (int i = 8; i >= 0; --i) {
        s = O::fma_(s, t, V(kSinPoly[i]));
        c = O::fma_(c, t, V(kCosPoly[i]));
    }
    s = s * f;
    V q = k - V(4.0) * O::floor_(k * V(0.25));  // k mod 4, exact
    V pick = O::select((q == V(1.0)) || (q == V(3.0)), c, s);
    return O::select(q >= V(2.0), -pick, pick);
}

// x mod 1 in [0,1). The clamp handles the rounding-up case (e.g. tiny
// negative x where x - floor(x) rounds to exactly 1.0).
template <class V, class O>
inline V frac01(V x) {
    V u = x - O::floor_(x);
    return O::select(u >= V(1.0), V(0.0), u);
}

template <class V, class O>
inline V phi_standard(const LiftParams& p, V x) {
    V s = sin2pi_core<V, O>(x + V(p.rot));
    return O::fma_(V(p.b), s, V(p.omega + p.rot_shift));
}

struct ScalarOps {
    static double fma_(double a, double b, double c) { return std::fma(a, b, c); }
    static double nearbyint_(double a) { return std::nearbyint(a); }
    static double floor_(double a) { return std::floor(a); }
    static double select(bool m, double a, double b) { return m ? a : b; }
};

// Periodic piecewise-linear evaluation; scalar only. The SIMD lane calls it
// per element (irregular breakpoints do not gather well and the pwl kind is
// never the hot path).
inline double phi_pwl_scalar(const LiftParams& p, double x) {
    double u = frac01<double, ScalarOps>(x + p.rot);
    std::size_t lo = 0, hi = p.n - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (p.xs[mid] <= u)
            lo = mid;
        else
            hi = mid;
    }
    double slope = (p.ys[lo + 1] - p.ys[lo]) / (p.xs[lo + 1] - p.xs[lo]);
    return std::fma(u - p.xs[lo], slope, p.ys[lo]) + p.rot_shift;
}

inline double phi_tabulated_scalar(const LiftParams& p, double x) {
    double u = frac01<double, ScalarOps>(x + p.rot);
    double s = u * static_cast<double>(p.ns);
    double j = std::floor(s);
    double f = s - j;
    auto idx = static_cast<std::size_t>(j);
    double y0 = p.samples[idx];
    double y1 = p.samples[idx + 1 == p.ns ? 0 : idx + 1];
    return std::fma(f, y1 - y0, y0) + p.rot_shift;
}

inline double phi_one_scalar(const LiftParams& p, double x) {
    switch (p.kind) {
        case LiftParams::standard:
            return phi_standard<double, ScalarOps>(p, x);
        case LiftParams::piecewise_linear:
            return phi_pwl_scalar(p, x);
        default:
            return phi_tabulated_scalar(p, x);
    }
}

inline double lift_one_scalar(const LiftParams& p, double x) {
    return std::fma(p.degree, x, phi_one_scalar(p, x));
}

inline double alpha_one_scalar(const LiftParams& p, double x, int depth, const double* w) {
    double u = frac01<double, ScalarOps>(x);
    double acc = 0.0;
    for (int k = 0; k < depth; ++k) {
        double pv = phi_one_scalar(p, u);
        acc = std::fma(pv, w[k], acc);
        u = frac01<double, ScalarOps>(std::fma(p.degree, u, pv));
    }
    return x + acc;
}

inline void fill_weights(double degree, int depth, double* w) {
    assert(depth >= 0);
    double cur = 1.0;
    for (int k = 0; k < depth; ++k) {
        cur = cur / degree;
        w[k] = cur;
    }
}

inline constexpr int kMaxSeriesDepth = 256;

}  // namespace circledyn::kernels::detail
