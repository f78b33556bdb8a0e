#pragma once

// Leftmost preimages p_r = min{ x : alpha(x) = r } of the semiconjugacy
// lift, and the rigid-rotation normalization that puts p_0 at 0. Because
// alpha = id + gamma with ||gamma|| <= ||phi||, every crossing of level r
// lives in [r - ||phi||, r + ||phi||]; the solver tabulates alpha once on a
// covering grid and answers queries by leftmost sign change plus bisection.
// Degree-one equivariance p_{r+1} = p_r + 1 reduces every query to a base
// level in [0,1).

#include <cstddef>
#include <vector>

#include "circledyn/semiconjugacy.hpp"

namespace circledyn {

struct PreimageOptions {
    std::size_t scan_density = 100000;  // grid points per unit length
    double tol = 1e-12;                 // bisection width for the crossing
};

class PreimageSolver {
public:
    explicit PreimageSolver(SemiconjugacyEvaluator e, PreimageOptions opts = {});

    const SemiconjugacyEvaluator& evaluator() const { return eval_; }
    const PreimageOptions& options() const { return opts_; }

    // Leftmost x with alpha(x) = r. Tangential (non-crossing) touches of
    // level r can be missed at scan resolution; near-touches within
    // 10*tol of the level get one refinement pass at 10x density.
    double p_r(double r) const;

    // p_{k,N} = p_r at r = k/2^N for k = 0..2^N; the last entry is
    // p_{0,N} + 1 by degree-one equivariance.
    std::vector<double> dyadic_preimages(int level) const;

private:
    double base_p_r(double r) const;  // r in [0,1)
    double bisect(double a, double b, double r) const;
    double refine_cell(std::size_t cell, double r) const;  // 10x pass, NaN if no crossing
    double x_of(std::size_t i) const {
        return static_cast<double>(k_lo_ + static_cast<long long>(i)) * h_;
    }

    SemiconjugacyEvaluator eval_;
    PreimageOptions opts_;
    long long k_lo_ = 0;  // grid anchored at integer multiples of h_
    double h_ = 0.0;
    std::vector<double> alpha_;  // alpha on x_of(i)
};

// conjugate_by_rotation(m, c) with c = p_0 of e's map, so the result has
// p_0 = 0 (idempotent up to the bisection tolerance).
LiftedCircleMap normalize(const SemiconjugacyEvaluator& e, PreimageOptions opts = {});

}  // namespace circledyn
