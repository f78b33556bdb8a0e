#include "circledyn/variation.hpp"

#include <algorithm>
#include <cmath>

#include "circledyn/errors.hpp"

namespace circledyn {

VariationSeries variation_series(const LiftedCircleMap& m, int n_max,
                                 std::size_t piece_cap) {
    if (n_max < 1) throw SpecError("variation_series: n_max must be >= 1");
    auto turning = m.turning_points();

    VariationSeries out;
    // image intervals of the monotone pieces of g^k, k starting at 0 (identity)
    std::vector<double> lo = {0.0}, hi = {1.0};
    std::vector<double> pts, next_lo, next_hi;

    for (int k = 1; k <= n_max; ++k) {
        // subdivision points for every interval, then one batched map pass
        pts.clear();
        std::vector<std::size_t> offsets(lo.size() + 1, 0);
        for (std::size_t i = 0; i < lo.size(); ++i) {
            pts.push_back(lo[i]);
            for (double t : turning) {
                double mlo = std::floor(lo[i] - t) + 1.0;  // smallest m with t+m > lo
                for (double mm = mlo; t + mm < hi[i]; mm += 1.0) {
                    double s = t + mm;
                    if (s > lo[i]) pts.push_back(s);
                }
            }
            pts.push_back(hi[i]);
            std::sort(pts.begin() + static_cast<std::ptrdiff_t>(offsets[i]), pts.end());
            offsets[i + 1] = pts.size();
        }
        if (pts.size() - lo.size() > piece_cap) {  // pieces for step k
            out.cap_hit = true;
            break;
        }
        m.iterate_batch(pts.data(), pts.size(), 1);

        next_lo.clear();
        next_hi.clear();
        double var = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            for (std::size_t j = offsets[i]; j + 1 < offsets[i + 1]; ++j) {
                double a = pts[j], b = pts[j + 1];
                if (b < a) std::swap(a, b);
                var += b - a;
                next_lo.push_back(a);
                next_hi.push_back(b);
            }
        }
        lo.swap(next_lo);
        hi.swap(next_hi);
        out.values.push_back(var);
        out.achieved = k;
        out.peak_pieces = std::max(out.peak_pieces, lo.size());
    }
    return out;
}

double variation_of_iterate(const LiftedCircleMap& m, int n, std::size_t piece_cap) {
    if (n < 1) throw SpecError("variation_of_iterate: n must be >= 1");
    auto s = variation_series(m, n, piece_cap);
    if (s.achieved < n)
        throw NumericError("variation_of_iterate: piece cap " + std::to_string(piece_cap) +
                           " hit at n = " + std::to_string(s.achieved + 1) +
                           " (achieved n = " + std::to_string(s.achieved) + ")");
    return s.values.back();
}

EntropyEstimate entropy_from_variation(const LiftedCircleMap& m, int n_min, int n_max,
                                       std::size_t piece_cap) {
    if (n_min < 1 || n_max - n_min < 4)
        throw SpecError("entropy_from_variation: need n_max - n_min >= 4");
    auto s = variation_series(m, n_max, piece_cap);

    EntropyEstimate e;
    e.cap_hit = s.cap_hit;
    e.n_lo = n_min;
    e.n_hi = std::min(n_max, s.achieved);
    if (e.n_hi - n_min < 1)
        throw NumericError("entropy_from_variation: variation piece cap leaves fewer than "
                           "two regression points (achieved n = " +
                           std::to_string(s.achieved) + ")");

    // least squares of log var(g^n) against n over [n_lo, n_hi]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = e.n_lo; n <= e.n_hi; ++n) {
        double x = n, y = std::log(s.values[static_cast<std::size_t>(n - 1)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    double denom = cnt * sxx - sx * sx;
    e.variation_rate = (cnt * sxy - sx * sy) / denom;
    double icept = (sy - e.variation_rate * sx) / cnt;
    double rss = 0;
    for (int n = e.n_lo; n <= e.n_hi; ++n) {
        double y = std::log(s.values[static_cast<std::size_t>(n - 1)]);
        double r = y - (e.variation_rate * n + icept);
        rss += r * r;
    }
    e.residual = std::sqrt(rss / cnt);
    return e;
}

double entropy_lower_bound(const FoldWitness& w) {
    return std::log(std::ldexp(1.0, w.N) + 2.0) / static_cast<double>(w.N);
}

}  // namespace circledyn
