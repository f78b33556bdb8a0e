#include "circledyn/fold.hpp"

#include <algorithm>
#include <cmath>

#include "circledyn/errors.hpp"

namespace circledyn {

namespace {

// min and argmin of g^N over `grid` points of [a, b]
std::pair<double, double> grid_min(const LiftedCircleMap& m, int N, double a, double b,
                                   std::size_t grid) {
    std::vector<double> ys(grid + 1);
    double h = (b - a) / static_cast<double>(grid);
    for (std::size_t i = 0; i <= grid; ++i) ys[i] = a + h * static_cast<double>(i);
    std::vector<double> xs = ys;
    m.iterate_batch(ys.data(), ys.size(), N);
    std::size_t best = 0;
    for (std::size_t i = 1; i <= grid; ++i)
        if (ys[i] < ys[best]) best = i;
    return {ys[best], xs[best]};
}

// bisection for g^N(x) = target on [a, b] with g^N(a) > target >= g^N(b)
double bisect_iterate(const LiftedCircleMap& m, int N, double a, double b, double target) {
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (m.iterate(mid, N) > target)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<FoldWitness> find_fold(const PreimageSolver& ps, FoldOptions opts) {
    if (opts.n_max < 1) throw SpecError("find_fold: N_max must be >= 1");
    if (opts.cell_grid < 16) throw SpecError("find_fold: cell grid too coarse");
    const auto& m = ps.evaluator().map();
    // guard against unnormalized input; the threshold is loose because the
    // leftmost preimage of a comb-like alpha is only scan-cell accurate
    if (std::abs(ps.p_r(0.0)) > 1e-3)
        throw SpecError("find_fold requires a normalized map (p_0 = 0); call normalize()");

    for (int N = 1; N <= opts.n_max; ++N) {
        auto p = ps.dyadic_preimages(N);
        auto cells = (std::int64_t{1} << N);
        for (std::int64_t K = 0; K < cells; ++K) {
            double pl = p[static_cast<std::size_t>(K)];
            double pr = p[static_cast<std::size_t>(K) + 1];
            if (!(pl < pr)) continue;  // degenerate cell at scan resolution
            auto target = static_cast<double>(K - 1);
            auto [vmin, xmin] = grid_min(m, N, pl, pr, opts.cell_grid);
            if (vmin > target + opts.fold_tol) {
                // refinement pass around the coarse minimum
                double h = (pr - pl) / static_cast<double>(opts.cell_grid);
                double ra = std::max(pl, xmin - h), rb = std::min(pr, xmin + h);
                std::tie(vmin, xmin) = grid_min(m, N, ra, rb, 128);
                if (vmin > target + opts.fold_tol) continue;
            }
            FoldWitness w;
            w.N = N;
            w.K = K;
            w.p_left = pl;
            w.p_right = pr;
            if (vmin <= target) {
                w.x_hat = bisect_iterate(m, N, pl, xmin, target);
            } else {
                w.x_hat = xmin;  // tangential dip within fold_tol of the level
            }
            if (!(pl < w.x_hat && w.x_hat < pr)) continue;
            w.residual = std::abs(m.iterate(w.x_hat, N) - target);
            if (w.residual <= opts.fold_tol) return w;
        }
    }
    return std::nullopt;
}

}  // namespace circledyn
