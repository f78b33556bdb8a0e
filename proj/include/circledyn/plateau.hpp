#pragma once

// Monotone-light bookkeeping at finite resolution: maximal intervals where
// alpha is constant up to eps_plateau ("plateaus", the intervals the
// monotone part of the Eilenberg-Whyburn decomposition would collapse), and
// the collapsed evaluator that snaps them to their constant value. Building
// the induced quotient map is out of scope; only the detection lives here.

#include <cstddef>
#include <vector>

#include "circledyn/semiconjugacy.hpp"

namespace circledyn {

struct Plateau {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;  // alpha on the plateau (midpoint sample)
};

class PlateauDecomposition {
public:
    PlateauDecomposition(SemiconjugacyEvaluator e, std::vector<Plateau> plateaus,
                         double epsilon)
        : eval_(std::move(e)), plateaus_(std::move(plateaus)), epsilon_(epsilon) {}

    const std::vector<Plateau>& plateaus() const { return plateaus_; }
    double epsilon() const { return epsilon_; }

    // alpha with plateaus collapsed to their constant value; within
    // epsilon() of alpha everywhere, equal to it off the plateaus.
    double light_value(double x) const;

private:
    SemiconjugacyEvaluator eval_;
    std::vector<Plateau> plateaus_;
    double epsilon_;
};

// Scans alpha on a uniform grid of [0,1) and merges maximal runs spanning
// at least two grid cells whose oscillation stays within eps_plateau.
// eps_plateau <= 0 selects the default 10 * tail_bound (below that,
// constancy is indistinguishable from truncation error).
PlateauDecomposition plateau_decomposition(const SemiconjugacyEvaluator& e,
                                           std::size_t resolution,
                                           double eps_plateau = 0.0);

}  // namespace circledyn
