// SIMD variants of the batch kernels via std::experimental::simd. On x86-64
// this translation unit is compiled with -mavx2 -mfma (4 lanes); on AArch64
// the baseline NEON gives 2 lanes. The dispatcher only hands out this table
// after a cpuid check, so nothing here executes on unsupported hardware.

#include "circledyn/kernels.hpp"

#ifdef CIRCLEDYN_HAVE_SIMD

#include <experimental/simd>

#include "kernel_impl.hpp"

namespace stdx = std::experimental;

namespace circledyn::kernels {
namespace {

namespace d = detail;

using vd = stdx::native_simd<double>;
constexpr std::size_t W = vd::size();

struct VecOps {
    static vd fma_(vd a, vd b, vd c) { return stdx::fma(a, b, c); }
    static vd nearbyint_(vd a) { return stdx::nearbyint(a); }
    static vd floor_(vd a) { return stdx::floor(a); }
    static vd select(typename vd::mask_type m, vd a, vd b) {
        vd r = b;
        stdx::where(m, r) = a;
        return r;
    }
};

inline vd load(const double* p) {
    vd v;
    v.copy_from(p, stdx::element_aligned);
    return v;
}

inline void store(double* p, vd v) { v.copy_to(p, stdx::element_aligned); }

inline vd phi_tabulated_v(const LiftParams& p, vd x) {
    vd u = d::frac01<vd, VecOps>(x + vd(p.rot));
    vd s = u * vd(static_cast<double>(p.ns));
    vd j = stdx::floor(s);
    vd f = s - j;
    double y0l[W], y1l[W];
    for (std::size_t l = 0; l < W; ++l) {
        auto idx = static_cast<std::size_t>(j[l]);
        y0l[l] = p.samples[idx];
        y1l[l] = p.samples[idx + 1 == p.ns ? 0 : idx + 1];
    }
    vd y0 = load(y0l), y1 = load(y1l);
    return stdx::fma(f, y1 - y0, y0) + vd(p.rot_shift);
}

inline vd phi_pwl_v(const LiftParams& p, vd x) {
    double out[W];
    for (std::size_t l = 0; l < W; ++l) out[l] = d::phi_pwl_scalar(p, x[l]);
    return load(out);
}

inline vd phi_one_v(const LiftParams& p, vd x) {
    switch (p.kind) {
        case LiftParams::standard:
            return d::phi_standard<vd, VecOps>(p, x);
        case LiftParams::piecewise_linear:
            return phi_pwl_v(p, x);
        default:
            return phi_tabulated_v(p, x);
    }
}

void sin2pi_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) store(out + i, d::sin2pi_core<vd, VecOps>(load(x + i)));
    for (; i < n; ++i) out[i] = d::sin2pi_core<double, d::ScalarOps>(x[i]);
}

void phi_batch(const LiftParams& p, const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) store(out + i, phi_one_v(p, load(x + i)));
    for (; i < n; ++i) out[i] = d::phi_one_scalar(p, x[i]);
}

void lift_batch(const LiftParams& p, const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd xv = load(x + i);
        store(out + i, stdx::fma(vd(p.degree), xv, phi_one_v(p, xv)));
    }
    for (; i < n; ++i) out[i] = d::lift_one_scalar(p, x[i]);
}

void iterate_batch(const LiftParams& p, double* y, std::size_t n, int steps) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd v = load(y + i);
        for (int s = 0; s < steps; ++s) v = stdx::fma(vd(p.degree), v, phi_one_v(p, v));
        store(y + i, v);
    }
    for (; i < n; ++i) {
        double v = y[i];
        for (int s = 0; s < steps; ++s) v = d::lift_one_scalar(p, v);
        y[i] = v;
    }
}

void alpha_batch(const LiftParams& p, const double* x, double* alpha, std::size_t n,
                 int depth) {
    double w[d::kMaxSeriesDepth];
    d::fill_weights(p.degree, depth, w);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd xv = load(x + i);
        vd u = d::frac01<vd, VecOps>(xv);
        vd acc(0.0);
        for (int k = 0; k < depth; ++k) {
            vd pv = phi_one_v(p, u);
            acc = stdx::fma(pv, vd(w[k]), acc);
            u = d::frac01<vd, VecOps>(stdx::fma(vd(p.degree), u, pv));
        }
        store(alpha + i, xv + acc);
    }
    for (; i < n; ++i) alpha[i] = d::alpha_one_scalar(p, x[i], depth, w);
}

#if defined(__aarch64__) || defined(_M_ARM64)
constexpr const char* kSimdName = "simd-neon";
#else
constexpr const char* kSimdName = "simd-avx2";
#endif

const KernelTable kSimdTable = {
    kSimdName, &sin2pi_batch, &phi_batch, &lift_batch, &iterate_batch, &alpha_batch,
};

}  // namespace

const KernelTable* simd_table_impl() { return &kSimdTable; }

}  // namespace circledyn::kernels

#endif  // CIRCLEDYN_HAVE_SIMD
