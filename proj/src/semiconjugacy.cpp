#include "circledyn/semiconjugacy.hpp"

#include <algorithm>
#include <cmath>

#include "circledyn/errors.hpp"

namespace circledyn {

namespace {
constexpr int kHardDepthLimit = 255;  // kernel series buffer bound

double periodic_lerp(const std::vector<double>& v, double y) {
    double u = y - std::floor(y);
    if (u >= 1.0) u = 0.0;
    auto m = static_cast<double>(v.size());
    double s = u * m;
    double j = std::floor(s);
    double f = s - j;
    auto idx = static_cast<std::size_t>(j);
    double y0 = v[idx];
    double y1 = v[idx + 1 == v.size() ? 0 : idx + 1];
    return std::fma(f, y1 - y0, y0);
}
}  // namespace

int depth_for_tolerance(const LiftedCircleMap& m, double eps) {
    if (!(eps > 0.0)) throw SpecError("depth_for_tolerance: eps must be > 0");
    double bound = m.phi_sup_norm() / (m.degree() - 1);
    int n = 0;
    while (bound > eps && n < kHardDepthLimit) {
        bound /= m.degree();
        ++n;
    }
    return n;
}

SemiconjugacyEvaluator::SemiconjugacyEvaluator(LiftedCircleMap map, int depth)
    : map_(std::move(map)), depth_(depth) {
    if (depth_ < 0 || depth_ > kHardDepthLimit)
        throw SpecError("semiconjugacy depth out of range");
    tail_bound_ = map_.phi_sup_norm() / (map_.degree() - 1) *
                  std::pow(static_cast<double>(map_.degree()), -depth_);
}

SemiconjugacyEvaluator SemiconjugacyEvaluator::make(LiftedCircleMap map, double tol,
                                                    int depth_cap) {
    int want = depth_for_tolerance(map, tol);
    int depth = std::min(want, depth_cap);
    SemiconjugacyEvaluator e(std::move(map), depth);
    e.capped_ = want > depth_cap;
    e.requested_tol_ = tol;
    return e;
}

double SemiconjugacyEvaluator::alpha(double x) const {
    double out;
    kernels::active_kernels().alpha_batch(map_.kernel_params(), &x, &out, 1, depth_);
    return out;
}

void SemiconjugacyEvaluator::alpha_batch(const double* x, double* out,
                                         std::size_t n) const {
    kernels::active_kernels().alpha_batch(map_.kernel_params(), x, out, n, depth_);
}

std::vector<double> SemiconjugacyEvaluator::alpha_grid(double lo, double hi,
                                                       std::size_t points) const {
    if (points < 2) throw SpecError("alpha_grid: need at least 2 points");
    std::vector<double> xs(points), out(points);
    double h = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) xs[i] = lo + h * static_cast<double>(i);
    alpha_batch(xs.data(), out.data(), points);
    return out;
}

std::vector<double> operator_G_step(const LiftedCircleMap& m,
                                    const std::vector<double>& sigma) {
    if (sigma.size() < 2) throw SpecError("operator_G_step: sigma grid too small");
    const std::size_t n = sigma.size();
    std::vector<double> xs(n), gx(n), phi(n), out(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(n);
    m.eval_batch(xs.data(), gx.data(), n);
    m.phi_batch(xs.data(), phi.data(), n);
    double invd = 1.0 / m.degree();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (phi[i] + periodic_lerp(sigma, gx[i])) * invd;
    return out;
}

double semiconjugacy_defect(const SemiconjugacyEvaluator& e, std::size_t grid) {
    if (grid < 2) throw SpecError("semiconjugacy_defect: grid must be >= 2");
    const auto& m = e.map();
    std::vector<double> xs(grid), gx(grid), a0(grid), a1(grid);
    for (std::size_t i = 0; i < grid; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(grid);
    m.eval_batch(xs.data(), gx.data(), grid);
    e.alpha_batch(xs.data(), a0.data(), grid);
    e.alpha_batch(gx.data(), a1.data(), grid);
    double d = static_cast<double>(m.degree());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid; ++i)
        worst = std::max(worst, std::abs(a1[i] - d * a0[i]));
    return worst;
}

double shadow_check(const SemiconjugacyEvaluator& e, double x, int n_max) {
    if (n_max < 1) throw SpecError("shadow_check: n_max must be >= 1");
    double worst = std::abs(e.gamma(x));
    double y = x;
    for (int k = 1; k <= n_max; ++k) {
        y = e.map().iterate(y, 1);
        worst = std::max(worst, std::abs(e.gamma(y)));
    }
    return worst;
}

}  // namespace circledyn
