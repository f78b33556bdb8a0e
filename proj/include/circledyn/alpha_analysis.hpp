#pragma once

// Complexity measurements on the semiconjugacy itself: total variation of
// alpha over refining dyadic partitions (unbounded exactly when a fold
// exists, with per-generation growth rate (2^N + 2)/2^N), connected
// components of fibers alpha^{-1}(theta) at a sequence of resolutions, and
// the box-counting dimension of the graph of alpha in the unit torus square.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "circledyn/fold.hpp"
#include "circledyn/semiconjugacy.hpp"

namespace circledyn {

struct VariationProfile {
    int M = 1;                    // dyadic partition at scale 2^{-M j}
    std::vector<int> depths;      // j = 1..j_max
    std::vector<double> values;   // var of alpha over the depth-j partition
    std::vector<double> ratios;   // values[j]/values[j-1], ratios[0] = values[0]
    double bound_rate = 0.0;      // (2^N + 2)/2^N when a fold witness is given
    std::vector<bool> bound_ok;   // values[j] >= 0.95 * bound_rate^j
};

// Without a witness M = 1. With one, M is chosen so depth-j cells resolve
// horseshoe generation j: intervals shrink by up to Lip(g)^N per
// generation, so M = max(N, ceil(N log2 Lip(g))), capped at 8; j_max is
// clamped so the partition stays within 2^24 points.
VariationProfile variation_profile_alpha(const SemiconjugacyEvaluator& e, int j_max,
                                         const std::optional<FoldWitness>& w = {});

struct FiberReport {
    double theta = 0.0;
    std::vector<std::size_t> resolutions;
    std::vector<int> component_counts;  // per resolution, >= 1 (alpha is onto)
    double gap_threshold = 0.0;         // 10 * tail_bound (floored at 1e-13)
};

// Marks grid cells of [0,1) that meet the fiber over theta (branch crossing
// or proximity within the gap threshold) and counts maximal circular runs.
// grid_phase in [0,1) shifts the grid by a fraction of a cell.
FiberReport fiber_components(const SemiconjugacyEvaluator& e, double theta,
                             std::vector<std::size_t> resolutions,
                             double grid_phase = 0.0);

// Seeded uniform thetas for the typical-fiber probe (the paper's generic
// set has full measure, so uniform sampling is the faithful finite probe).
std::vector<double> sample_thetas(std::uint64_t seed, int count);

int median_count(std::vector<int> counts);

struct BoxDimensionEstimate {
    std::vector<int> depths;            // dyadic scales 2^{-j}
    std::vector<std::size_t> counts;    // occupied boxes of the graph
    double dimension = 0.0;             // slope of log count vs j log 2
    double residual = 0.0;              // rms residual of the fit
};

// Graph {(x, alpha(x) mod 1)} on the unit torus square; boxes straddling
// the y = 0 seam wrap (the x seam is handled by periodicity).
BoxDimensionEstimate box_dimension_graph(const SemiconjugacyEvaluator& e,
                                         std::vector<int> depths,
                                         int samples_per_column = 64);

}  // namespace circledyn
