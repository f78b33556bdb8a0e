#pragma once

// Detection of the "fold" that certifies a non-injective semiconjugacy:
// a triple (N, K, x_hat) with p_{K,N} < x_hat < p_{K+1,N} and
// g^N(x_hat) = K - 1. The search runs over cells in lexicographic (N, K)
// order, so the first hit carries the strongest entropy bound
// log(2^N + 2)/N. A miss up to N_max is evidence, not a proof, of an
// injective semiconjugacy.

#include <cstdint>
#include <optional>

#include "circledyn/preimage.hpp"

namespace circledyn {

struct FoldWitness {
    int N = 0;
    std::int64_t K = 0;
    double x_hat = 0.0;
    double p_left = 0.0;   // p_{K,N}
    double p_right = 0.0;  // p_{K+1,N}
    double residual = 0.0;  // |g^N(x_hat) - (K-1)|
};

struct FoldOptions {
    int n_max = 10;
    std::size_t cell_grid = 4096;  // g^N samples per cell, before refinement
    double fold_tol = 1e-9;        // residual acceptance for tangential dips
};

// Requires a normalized map (p_0 = 0 within 1e-6); throws SpecError otherwise.
std::optional<FoldWitness> find_fold(const PreimageSolver& ps, FoldOptions opts = {});

}  // namespace circledyn
