#include "circledyn/preimage.hpp"

#include <cmath>
#include <limits>

#include "circledyn/errors.hpp"

namespace circledyn {

PreimageSolver::PreimageSolver(SemiconjugacyEvaluator e, PreimageOptions opts)
    : eval_(std::move(e)), opts_(opts) {
    if (opts_.scan_density < 1000)
        throw SpecError("PreimageSolver: scan density must be >= 1000 points per unit");
    if (!(opts_.tol > 0.0)) throw SpecError("PreimageSolver: tol must be > 0");
    double norm = eval_.map().phi_sup_norm();
    h_ = 1.0 / static_cast<double>(opts_.scan_density);
    // anchor the grid at integer multiples of h so the integers themselves
    // (in particular p_0 = 0 of a normalized map) are sample points
    k_lo_ = static_cast<long long>(std::floor((-norm - 4.0 * h_) / h_));
    auto k_hi = static_cast<long long>(std::ceil((1.0 + norm + 4.0 * h_) / h_));
    auto points = static_cast<std::size_t>(k_hi - k_lo_) + 1;
    std::vector<double> xs(points);
    for (std::size_t i = 0; i < points; ++i) xs[i] = x_of(i);
    alpha_.resize(points);
    eval_.alpha_batch(xs.data(), alpha_.data(), points);
}

double PreimageSolver::bisect(double a, double b, double r) const {
    // invariant: alpha(a) < r <= alpha(b)
    for (int it = 0; it < 200 && (b - a) > opts_.tol; ++it) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (eval_.alpha(mid) < r)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double PreimageSolver::refine_cell(std::size_t cell, double r) const {
    double xa = x_of(cell);
    constexpr int kSub = 10;
    double sub[kSub + 1], val[kSub + 1];
    for (int s = 0; s <= kSub; ++s) sub[s] = xa + h_ * static_cast<double>(s) / kSub;
    eval_.alpha_batch(sub, val, kSub + 1);
    for (int s = 0; s < kSub; ++s)
        if (val[s] < r && val[s + 1] >= r) return bisect(sub[s], sub[s + 1], r);
    return std::numeric_limits<double>::quiet_NaN();
}

double PreimageSolver::base_p_r(double r) const {
    const double norm = eval_.map().phi_sup_norm();
    const auto n = alpha_.size();
    double x_start = r - norm - 2.0 * h_;
    double lo = x_of(0);
    auto i = x_start <= lo ? std::size_t{0}
                           : static_cast<std::size_t>(std::floor((x_start - lo) / h_));
    // back up if the conservative start is already at or above the level
    while (i > 0 && alpha_[i] >= r) --i;
    std::size_t cross = n;
    for (std::size_t j = i; j + 1 < n; ++j) {
        if (alpha_[j] < r && alpha_[j + 1] >= r) {
            cross = j;
            break;
        }
    }
    if (cross == n)
        throw NumericError("p_r: no crossing of level " + std::to_string(r) +
                           " found; scan too coarse or evaluator inconsistent");
    // one refinement pass over earlier near-touches (|alpha - r| < 10*tol)
    double touch = 10.0 * opts_.tol;
    for (std::size_t j = i; j < cross; ++j) {
        if (std::abs(alpha_[j] - r) < touch || std::abs(alpha_[j + 1] - r) < touch) {
            double hit = refine_cell(j, r);
            if (!std::isnan(hit)) return hit;
        }
    }
    return bisect(x_of(cross), x_of(cross + 1), r);
}

double PreimageSolver::p_r(double r) const {
    double m = std::floor(r);
    double rb = r - m;
    if (rb >= 1.0) {  // rounding right at the seam
        rb = 0.0;
        m += 1.0;
    }
    return base_p_r(rb) + m;
}

std::vector<double> PreimageSolver::dyadic_preimages(int level) const {
    if (level < 0 || level > 40) throw SpecError("dyadic_preimages: level out of range");
    auto count = static_cast<std::size_t>(1) << level;
    std::vector<double> out(count + 1);
    double scale = std::ldexp(1.0, -level);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = base_p_r(static_cast<double>(k) * scale);
    out[count] = out[0] + 1.0;  // degree-one equivariance
    return out;
}

LiftedCircleMap normalize(const SemiconjugacyEvaluator& e, PreimageOptions opts) {
    PreimageSolver solver(e, opts);
    double c = solver.p_r(0.0);
    // sub-tolerance offsets are below what p_r resolves; rotating by them
    // would only churn the arithmetic, so an already-normalized map is a
    // true fixed point
    if (std::abs(c) <= 10.0 * opts.tol) return e.map();
    return e.map().conjugate_by_rotation(c);
}

}  // namespace circledyn
