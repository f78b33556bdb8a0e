#include "circledyn/kernels.hpp"

#include <cmath>

#include "kernel_impl.hpp"

namespace circledyn::kernels {
namespace {

namespace d = detail;

void sin2pi_batch(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = d::sin2pi_core<double, d::ScalarOps>(x[i]);
}

void phi_batch(const LiftParams& p, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = d::phi_one_scalar(p, x[i]);
}

void lift_batch(const LiftParams& p, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = d::lift_one_scalar(p, x[i]);
}

void iterate_batch(const LiftParams& p, double* y, std::size_t n, int steps) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = y[i];
        for (int s = 0; s < steps; ++s) v = d::lift_one_scalar(p, v);
        y[i] = v;
    }
}

void alpha_batch(const LiftParams& p, const double* x, double* alpha, std::size_t n,
                 int depth) {
    double w[d::kMaxSeriesDepth];
    d::fill_weights(p.degree, depth, w);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = d::alpha_one_scalar(p, x[i], depth, w);
}

const KernelTable kScalarTable = {
    "scalar", &sin2pi_batch, &phi_batch, &lift_batch, &iterate_batch, &alpha_batch,
};

}  // namespace

double sin2pi(double x) { return detail::sin2pi_core<double, detail::ScalarOps>(x); }

double phi_eval(const LiftParams& p, double x) { return detail::phi_one_scalar(p, x); }

double lift_eval(const LiftParams& p, double x) { return detail::lift_one_scalar(p, x); }

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace circledyn::kernels
