#pragma once

// Lifts of continuous degree-D circle maps, g(x) = D*x + phi(x) with phi
// 1-periodic. Three shapes of periodic part are supported: the standard
// sine family omega + b*sin(2*pi*x), piecewise-linear interpolation through
// breakpoints, and tabulated samples on a uniform grid. Maps are immutable
// values; every operation is pure.

#include <cstdint>
#include <utility>
#include <vector>

#include "circledyn/kernels.hpp"

namespace circledyn {

enum class PhiKind { standard, piecewise_linear, tabulated };

class PeriodicPart {
public:
    // phi(x) = omega + b*sin(2*pi*x)
    static PeriodicPart standard(double b, double omega);
    // Breakpoints (x_i, y_i): x strictly increasing, x_0 = 0, x_last = 1,
    // y_0 == y_last exactly (the construction refuses anything else).
    static PeriodicPart piecewise_linear(std::vector<std::pair<double, double>> points);
    // Samples of phi at i/n for i = 0..n-1, n >= 16; interpolation wraps
    // from the last sample back to the first, so periodicity is structural.
    static PeriodicPart tabulated(std::vector<double> samples);

    PhiKind kind() const { return kind_; }
    double b() const { return b_; }
    double omega() const { return omega_; }
    const std::vector<double>& breakpoint_x() const { return xs_; }
    const std::vector<double>& breakpoint_y() const { return ys_; }
    const std::vector<double>& samples() const { return samples_; }

    double operator()(double x) const;

    // sup |phi|: exact |omega| + |b| for the standard family, breakpoint /
    // sample max for the other kinds (linear interpolation cannot exceed
    // the node extremes).
    double sup_norm() const;

    // Lipschitz upper bound for phi (2*pi*|b|, max |slope|, n*max|dy|).
    double lipschitz_bound() const;

    // x-positions in [0,1) where the slope of x -> D*x + phi(x) changes
    // sign; empty when the lift is monotone. For the standard family these
    // are the two roots of D + 2*pi*b*cos(2*pi*x) = 0 when 2*pi*|b| > D.
    std::vector<double> turning_points(double degree) const;

private:
    PeriodicPart() = default;
    PhiKind kind_ = PhiKind::standard;
    double b_ = 0.0;
    double omega_ = 0.0;
    std::vector<double> xs_, ys_;    // piecewise-linear
    std::vector<double> samples_;    // tabulated
};

class LiftedCircleMap {
public:
    LiftedCircleMap(int degree, PeriodicPart phi, double rotation_offset = 0.0);

    int degree() const { return degree_; }
    const PeriodicPart& phi() const { return phi_; }
    double rotation_offset() const { return rotation_offset_; }

    // sup norm of the effective periodic part phi(x + c) + (D-1)c, exact
    // per kind (cached at construction).
    double phi_sup_norm() const { return phi_sup_norm_; }

    double phi_eval(double x) const;               // effective periodic part
    double eval(double x) const;                   // D*x + phi_eff(x)
    double iterate(double x, std::int64_t n) const;  // n >= 0; overflow reported

    // Kernel-backed batch evaluation (dispatched scalar/SIMD, bit-identical).
    void eval_batch(const double* x, double* out, std::size_t n) const;
    void phi_batch(const double* x, double* out, std::size_t n) const;
    void iterate_batch(double* y, std::size_t n, int steps) const;

    // round(g(x+1) - g(x)) verified constant over `grid` points; throws
    // NumericError if inconsistent or different from degree().
    int degree_check(std::size_t grid) const;

    // Lift of R_{-c} o g o R_c, i.e. x -> g(x + c) - c, as a wrapper around
    // the same periodic part (no resampling); rotation offsets accumulate.
    LiftedCircleMap conjugate_by_rotation(double c) const;

    // True when g(x_{i+1}) > g(x_i) over a `grid`-point partition of [0,1].
    bool strictly_increasing(std::size_t grid = 100000) const;

    // Positions in [0,1) where g' changes sign (see PeriodicPart).
    std::vector<double> turning_points() const;

    kernels::LiftParams kernel_params() const;

private:
    int degree_;
    PeriodicPart phi_;
    double rotation_offset_;
    double phi_sup_norm_;
};

double sup_norm_phi(const PeriodicPart& p);

}  // namespace circledyn
