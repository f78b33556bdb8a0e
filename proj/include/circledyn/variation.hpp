#pragma once

// Exact total variation of g^n on [0,1] for piecewise-monotone lifts, by
// propagating the monotone-piece subdivision in image space: the image
// intervals of the monotone pieces of g^n are split at every translate of a
// turning point of g and pushed through g once, so var(g^{n+1}) is the sum
// of the new image lengths. No root finding is involved and the count of
// pieces is the lap number, which is also the growth rate the entropy
// estimate regresses on.

#include <cstddef>
#include <optional>
#include <vector>

#include "circledyn/circle_map.hpp"
#include "circledyn/fold.hpp"

namespace circledyn {

struct VariationSeries {
    std::vector<double> values;  // var(g^n, [0,1]) for n = 1..achieved
    int achieved = 0;            // last n before the piece cap (== n_max if unhit)
    bool cap_hit = false;
    std::size_t peak_pieces = 0;
};

inline constexpr std::size_t kDefaultPieceCap = 10'000'000;

VariationSeries variation_series(const LiftedCircleMap& m, int n_max,
                                 std::size_t piece_cap = kDefaultPieceCap);

// var(g^n, [0,1]); throws NumericError when the piece cap aborts before n.
double variation_of_iterate(const LiftedCircleMap& m, int n,
                            std::size_t piece_cap = kDefaultPieceCap);

struct EntropyEstimate {
    std::optional<double> horseshoe_lb;  // log(2^N + 2)/N when a fold is known
    double variation_rate = 0.0;         // least-squares slope of log var(g^n) vs n
    int n_lo = 0, n_hi = 0;              // regression window actually used
    double residual = 0.0;               // rms residual of the fit
    bool cap_hit = false;
};

// Slope of log var(g^n) over [n_min, n_max]; a piece-cap abort shrinks the
// window to what was achieved (reported via n_hi/cap_hit) and throws only
// if fewer than two points remain.
EntropyEstimate entropy_from_variation(const LiftedCircleMap& m, int n_min, int n_max,
                                       std::size_t piece_cap = kDefaultPieceCap);

double entropy_lower_bound(const FoldWitness& w);

}  // namespace circledyn
