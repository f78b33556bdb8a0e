#include "circledyn/alpha_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "circledyn/errors.hpp"

namespace circledyn {

VariationProfile variation_profile_alpha(const SemiconjugacyEvaluator& e, int j_max,
                                         const std::optional<FoldWitness>& w) {
    if (j_max < 1) throw SpecError("variation_profile_alpha: j_max must be >= 1");
    VariationProfile out;
    if (w.has_value()) {
        // one horseshoe generation shrinks intervals by up to Lip(g)^N, so
        // resolving generation j needs dyadic cells of depth N*log2(Lip(g))*j
        double lip = e.map().degree() + e.map().phi().lipschitz_bound();
        out.M = std::max(w->N, static_cast<int>(std::ceil(
                                   w->N * std::log2(std::max(2.0, lip)))));
        out.M = std::min(out.M, 8);
    } else {
        out.M = 1;
    }
    j_max = std::max(1, std::min(j_max, 24 / out.M));  // partition size guard
    if (w.has_value()) {
        double cells = std::ldexp(1.0, w->N);
        out.bound_rate = (cells + 2.0) / cells;
    }
    for (int j = 1; j <= j_max; ++j) {
        auto pieces = static_cast<std::size_t>(1) << (out.M * j);
        auto vals = e.alpha_grid(0.0, 1.0, pieces + 1);
        double var = 0.0;
        for (std::size_t k = 0; k < pieces; ++k) var += std::abs(vals[k + 1] - vals[k]);
        out.depths.push_back(j);
        out.ratios.push_back(out.values.empty() ? var : var / out.values.back());
        out.values.push_back(var);
        if (w.has_value())
            out.bound_ok.push_back(var >= 0.95 * std::pow(out.bound_rate, j));
    }
    return out;
}

FiberReport fiber_components(const SemiconjugacyEvaluator& e, double theta,
                             std::vector<std::size_t> resolutions, double grid_phase) {
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        if (resolutions[i] <= resolutions[i - 1])
            throw SpecError("fiber_components: resolutions must be increasing");
    FiberReport rep;
    rep.theta = theta;
    rep.resolutions = resolutions;
    rep.gap_threshold = std::max(10.0 * e.tail_bound(), 1e-13);

    for (std::size_t R : resolutions) {
        if (R < 2) throw SpecError("fiber_components: resolution must be >= 2");
        std::vector<double> xs(R + 1), av(R + 1);
        for (std::size_t i = 0; i <= R; ++i)
            xs[i] = (static_cast<double>(i) + grid_phase) / static_cast<double>(R);
        e.alpha_batch(xs.data(), av.data(), R + 1);

        // cell i is "on the fiber" when a branch of alpha - theta crosses an
        // integer inside it or an endpoint sits within the gap threshold
        std::vector<char> on(R, 0);
        auto near_branch = [&](double d) {
            return std::abs(d - std::nearbyint(d)) <= rep.gap_threshold;
        };
        for (std::size_t i = 0; i < R; ++i) {
            double d0 = av[i] - theta, d1 = av[i + 1] - theta;
            bool crossing = std::floor(d0) != std::floor(d1);
            on[i] = (crossing || near_branch(d0) || near_branch(d1)) ? 1 : 0;
        }
        // circular run count (xs[R] = xs[0] + 1, so cell R-1 wraps onto cell 0)
        int runs = 0;
        for (std::size_t i = 0; i < R; ++i)
            if (on[i] && !on[(i + R - 1) % R]) ++runs;
        if (runs == 0 && !on.empty() && on[0]) runs = 1;  // fiber covers everything
        rep.component_counts.push_back(std::max(runs, 1));
    }
    return rep;
}

std::vector<double> sample_thetas(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& t : out) t = u(rng);
    return out;
}

int median_count(std::vector<int> counts) {
    if (counts.empty()) throw SpecError("median_count: empty");
    std::sort(counts.begin(), counts.end());
    return counts[counts.size() / 2];
}

BoxDimensionEstimate box_dimension_graph(const SemiconjugacyEvaluator& e,
                                         std::vector<int> depths,
                                         int samples_per_column) {
    if (depths.size() < 3)
        throw SpecError("box_dimension_graph: need at least 3 depths");
    for (int j : depths)
        if (j < 1 || j > 20) throw SpecError("box_dimension_graph: depth out of range");
    if (samples_per_column < 2)
        throw SpecError("box_dimension_graph: need >= 2 samples per column");

    BoxDimensionEstimate out;
    out.depths = depths;

    for (int j : depths) {
        auto cols = static_cast<std::size_t>(1) << j;
        auto S = static_cast<std::size_t>(samples_per_column);
        std::vector<double> xs(cols * S + 1), av(cols * S + 1);
        for (std::size_t i = 0; i < xs.size(); ++i)
            xs[i] = static_cast<double>(i) / static_cast<double>(cols * S);
        e.alpha_batch(xs.data(), av.data(), xs.size());

        double scale = std::ldexp(1.0, j);
        auto rows = static_cast<std::int64_t>(cols);
        std::vector<char> seen(cols, 0);
        std::vector<std::size_t> dirty;
        std::size_t total = 0;
        for (std::size_t k = 0; k < cols; ++k) {
            dirty.clear();
            auto mark = [&](std::int64_t b) {
                auto r = static_cast<std::size_t>(((b % rows) + rows) % rows);
                if (!seen[r]) {
                    seen[r] = 1;
                    dirty.push_back(r);
                }
            };
            // consecutive samples bracket every box the graph passes through
            for (std::size_t s = 0; s < S; ++s) {
                auto b0 = static_cast<std::int64_t>(std::floor(av[k * S + s] * scale));
                auto b1 = static_cast<std::int64_t>(std::floor(av[k * S + s + 1] * scale));
                if (b1 < b0) std::swap(b0, b1);
                if (b1 - b0 >= rows) {
                    b0 = 0;
                    b1 = rows - 1;
                }
                for (std::int64_t b = b0; b <= b1; ++b) mark(b);
            }
            total += dirty.size();
            for (std::size_t r : dirty) seen[r] = 0;
        }
        out.counts.push_back(total);
    }

    // least squares of log2(count) against depth
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto n = static_cast<double>(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
        double x = depths[i];
        double y = std::log2(static_cast<double>(out.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - out.dimension * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        double r = std::log2(static_cast<double>(out.counts[i])) -
                   (out.dimension * depths[i] + icept);
        rss += r * r;
    }
    out.residual = std::sqrt(rss / n);
    return out;
}

}  // namespace circledyn
