#pragma once

// Evaluation of the lift alpha(x) = x + gamma(x) of the unique degree-one
// semiconjugacy of g to angle multiplication by D, via the truncated series
//
//   alpha_n(x) = x + sum_{i=0}^{n-1} phi(g^i(x)) / D^{i+1},
//
// with the geometric tail bound ||phi|| / ((D-1) D^n). The internal orbit is
// reduced mod 1 at every step, which makes alpha_n(x+1) = alpha_n(x) + 1 an
// exact identity and keeps deep terms meaningful. Evaluators are immutable
// and safe to share across threads.

#include <cstddef>
#include <vector>

#include "circledyn/circle_map.hpp"

namespace circledyn {

// Smallest n with ||phi|| / ((D-1) D^n) <= eps; 0 when ||phi|| = 0.
int depth_for_tolerance(const LiftedCircleMap& m, double eps);

class SemiconjugacyEvaluator {
public:
    SemiconjugacyEvaluator(LiftedCircleMap map, int depth);

    // Depth from depth_for_tolerance(map, tol), capped (the cap is visible
    // through capped() and must be surfaced in any report).
    static SemiconjugacyEvaluator make(LiftedCircleMap map, double tol = 1e-12,
                                       int depth_cap = 60);

    const LiftedCircleMap& map() const { return map_; }
    int depth() const { return depth_; }
    double tail_bound() const { return tail_bound_; }
    bool capped() const { return capped_; }
    double requested_tolerance() const { return requested_tol_; }

    double alpha(double x) const;
    double gamma(double x) const { return alpha(x) - x; }
    void alpha_batch(const double* x, double* out, std::size_t n) const;
    std::vector<double> alpha_grid(double lo, double hi, std::size_t points) const;

private:
    LiftedCircleMap map_;
    int depth_;
    double tail_bound_;
    bool capped_ = false;
    double requested_tol_ = 0.0;
};

// One application of the periodic-part contraction sigma -> (phi + sigma o g)/D
// to a function tabulated on a uniform grid of [0,1) (periodic linear
// interpolation for the composition), resampled on the same grid.
std::vector<double> operator_G_step(const LiftedCircleMap& m,
                                    const std::vector<double>& sigma);

// sup over a uniform grid of [0,1) of |alpha_n(g(x)) - D*alpha_n(x)|;
// bounded by (D+1) * tail_bound.
double semiconjugacy_defect(const SemiconjugacyEvaluator& e, std::size_t grid);

// max over 0 <= k <= n_max of |gamma_n(g^k(x))|, the computable side of the
// global shadowing bound |g^n(x) - D^n alpha(x)| <= ||gamma|| <= ||phi||.
double shadow_check(const SemiconjugacyEvaluator& e, double x, int n_max);

}  // namespace circledyn
