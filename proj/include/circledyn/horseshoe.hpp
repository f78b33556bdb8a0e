#pragma once

// The (2^N + 2)-fold horseshoe certified by a fold witness: intervals I_eta
// indexed by the alphabet A = {0..2^N-1} \ {K} together with a, b, c inside
// the critical cell, each with g^N(I_eta) covering a full unit interval
// [0,1] + phi_addr(eta). Also the plain dyadic cover (no fold letters) for
// monotone maps, and the realization of coded orbits by backward interval
// pullback.

#include <cstdint>
#include <string>
#include <vector>

#include "circledyn/fold.hpp"

namespace circledyn {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Symbol codes: base symbols are their own value 0..2^N-1; the three fold
// letters use negative codes.
inline constexpr int kSymA = -1;
inline constexpr int kSymB = -2;
inline constexpr int kSymC = -3;

std::string symbol_name(int sym);
int parse_symbol(const std::string& name);  // "a"|"b"|"c"|decimal

class HorseshoeCover {
public:
    int N = 0;
    std::int64_t K = 0;
    bool has_fold_letters = false;

    // sorted by position on the circle; fold letters sit inside cell K
    std::vector<std::pair<int, Interval>> intervals;

    std::size_t alphabet_size() const { return intervals.size(); }
    std::vector<int> alphabet() const;
    const Interval& interval(int sym) const;

    // a, b -> K-1; c -> K; base k -> k
    std::int64_t phi_addr(int sym) const;

    // Finite-word analogue of the paper's nontrivial-tail condition: the
    // last symbol must avoid the ambiguous boundary pair, which is
    // {2^N-1, 0} generically, {2^N-1, a} when K = 0 and {c, 0} when
    // K = 2^N-1.
    bool nontrivial_tail(const std::vector<int>& word) const;
};

struct HorseshoeOptions {
    std::size_t cell_grid = 8192;
    double verify_tol = 1e-6;  // endpoint-image tolerance for every relation
};

// Constructs the cover from a witness (map must be the witness's normalized
// map, reachable through ps). Verifies every covering relation and throws
// NumericError naming the failing symbol.
HorseshoeCover build_horseshoe(const PreimageSolver& ps, const FoldWitness& w,
                               HorseshoeOptions opts = {});

// I_k = [p_{k,N}, p_{k+1,N}] for all k: the fold-free cover of a monotone
// map (alphabet size 2^N).
HorseshoeCover dyadic_cover(const PreimageSolver& ps, int N,
                            HorseshoeOptions opts = {});

// max endpoint-image error over all covering relations of the cover
double verify_cover(const HorseshoeCover& h, const LiftedCircleMap& m);

struct CodedInterval {
    Interval interval;          // J' in the first symbol's interval
    std::vector<double> stage_widths;  // width after each backward pullback
};

// Backward pullback realizing the coded orbit: returns J' in I_{s_0} with
// g^{Ni}(J') inside I_{s_i} + sum_{l<i} 2^{N(i-l-1)} phi_addr(s_l) for all
// i < |word|.
CodedInterval coded_point(const HorseshoeCover& h, const LiftedCircleMap& m,
                          const std::vector<int>& word, std::size_t grid = 4096);

// max over sample points and stages of the distance from g^{Ni}(x) to the
// stage-i target interval (0 when every constraint holds).
double verify_coded(const HorseshoeCover& h, const LiftedCircleMap& m,
                    const std::vector<int>& word, const Interval& J,
                    std::size_t samples = 33);

}  // namespace circledyn
