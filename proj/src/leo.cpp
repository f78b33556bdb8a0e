#include "circledyn/leo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "circledyn/errors.hpp"

namespace circledyn {

std::optional<int> leo_test(const LiftedCircleMap& m, double u_lo, double u_hi,
                            LeoOptions opts) {
    if (!(u_lo < u_hi)) throw SpecError("leo_test: interval must be nontrivial");
    if (opts.n_max < 1) throw SpecError("leo_test: n_max must be >= 1");
    if (opts.grid < 2) throw SpecError("leo_test: grid must be >= 2");

    std::vector<double> ys(opts.grid + 1);
    double h = (u_hi - u_lo) / static_cast<double>(opts.grid);
    for (std::size_t i = 0; i <= opts.grid; ++i)
        ys[i] = u_lo + h * static_cast<double>(i);

    for (int n = 1; n <= opts.n_max; ++n) {
        m.iterate_batch(ys.data(), ys.size(), 1);
        auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
        if (!std::isfinite(*mn) || std::abs(*mx) > 9.0e15)
            throw NumericError("leo_test: orbit overflow at step " + std::to_string(n));
        if (*mx - *mn >= 1.0) return n;
    }
    return std::nullopt;
}

}  // namespace circledyn
