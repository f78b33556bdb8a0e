#include "circledyn/plateau.hpp"

#include <algorithm>
#include <cmath>

#include "circledyn/errors.hpp"

namespace circledyn {

double PlateauDecomposition::light_value(double x) const {
    for (const auto& p : plateaus_)
        if (p.lo <= x && x <= p.hi) return p.value;
    return eval_.alpha(x);
}

PlateauDecomposition plateau_decomposition(const SemiconjugacyEvaluator& e,
                                           std::size_t resolution, double eps_plateau) {
    if (resolution < 1024)
        throw SpecError("plateau_decomposition: resolution must be >= 2^10");
    double eps = eps_plateau > 0.0 ? eps_plateau
                                   : std::max(10.0 * e.tail_bound(), 1e-14);
    auto vals = e.alpha_grid(0.0, 1.0, resolution + 1);

    std::vector<Plateau> out;
    std::size_t i = 0;
    while (i < resolution) {
        double vmin = vals[i], vmax = vals[i];
        std::size_t j = i;
        while (j + 1 <= resolution) {
            double nmin = std::min(vmin, vals[j + 1]);
            double nmax = std::max(vmax, vals[j + 1]);
            if (nmax - nmin > eps) break;
            vmin = nmin;
            vmax = nmax;
            ++j;
        }
        if (j >= i + 2) {
            double lo = static_cast<double>(i) / static_cast<double>(resolution);
            double hi = static_cast<double>(j) / static_cast<double>(resolution);
            out.push_back({lo, hi, e.alpha(0.5 * (lo + hi))});
            i = j + 1;  // keep plateaus strictly disjoint
        } else {
            ++i;
        }
    }
    return {e, std::move(out), eps};
}

}  // namespace circledyn
