#pragma once

// Batch arithmetic kernels for the grid sweeps that dominate runtime:
// periodic-part evaluation, lift evaluation/iteration, and the truncated
// semiconjugacy series. Every kernel exists in a scalar reference version
// and (on x86-64 with AVX2+FMA, or on AArch64 with NEON) a SIMD version.
// The two are bit-identical by construction: both use fused multiply-adds
// and round-to-nearest-even reductions in the same order, so runtime
// dispatch never changes results, only speed.

#include <cstddef>
#include <string>

namespace circledyn::kernels {

// Flattened, trivially-copyable view of a lift for kernel consumption.
// Exactly one of the three parameter groups is active, per `kind`.
struct LiftParams {
    enum Kind : int { standard = 0, piecewise_linear = 1, tabulated = 2 };
    int kind = standard;
    double degree = 2.0;
    double rot = 0.0;        // rotation offset c: phi_eff(x) = phi(x + c) + (D-1)c
    double rot_shift = 0.0;  // (D-1)*c, precomputed
    // standard family
    double b = 0.0;
    double omega = 0.0;
    // piecewise-linear: breakpoints xs[0..n-1] strictly increasing, xs[0]=0, xs[n-1]=1
    const double* xs = nullptr;
    const double* ys = nullptr;
    std::size_t n = 0;
    // tabulated: ns samples at i/ns, periodic wrap
    const double* samples = nullptr;
    std::size_t ns = 0;
};

// sin(2*pi*x), exactly 1-periodic and exact at quarter points.
double sin2pi(double x);

// Scalar single-point evaluators (used by root finders and other
// latency-bound call sites; identical formulas to the batch kernels).
double phi_eval(const LiftParams& p, double x);
double lift_eval(const LiftParams& p, double x);

struct KernelTable {
    const char* name;
    void (*sin2pi_batch)(const double* x, double* out, std::size_t n);
    // out[i] = phi_eff(x[i])
    void (*phi_batch)(const LiftParams& p, const double* x, double* out, std::size_t n);
    // out[i] = D*x[i] + phi_eff(x[i])
    void (*lift_batch)(const LiftParams& p, const double* x, double* out, std::size_t n);
    // y[i] <- lift(y[i]), applied `steps` times in place
    void (*iterate_batch)(const LiftParams& p, double* y, std::size_t n, int steps);
    // alpha[i] = x[i] + sum_{k<depth} phi_eff(orbit_k)/D^{k+1}, orbit reduced mod 1
    void (*alpha_batch)(const LiftParams& p, const double* x, double* alpha, std::size_t n,
                        int depth);
};

const KernelTable& scalar_kernels();

// Table picked at first use: SIMD when the CPU supports it, else scalar.
// The environment variable CIRCLEDYN_KERNELS={scalar,simd} overrides.
const KernelTable& active_kernels();

// nullptr when this build/CPU has no SIMD lane.
const KernelTable* simd_kernels_if_available();

std::string active_kernel_name();

}  // namespace circledyn::kernels
