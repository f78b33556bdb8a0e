#include "circledyn/horseshoe.hpp"

#include <algorithm>
#include <cmath>

#include "circledyn/errors.hpp"

namespace circledyn {

namespace {

std::vector<double> iterate_grid(const LiftedCircleMap& m, int N, double a, double b,
                                 std::size_t grid, std::vector<double>* xs_out = nullptr) {
    std::vector<double> ys(grid + 1);
    double h = (b - a) / static_cast<double>(grid);
    for (std::size_t i = 0; i <= grid; ++i) ys[i] = a + h * static_cast<double>(i);
    if (xs_out != nullptr) *xs_out = ys;
    m.iterate_batch(ys.data(), ys.size(), N);
    return ys;
}

// bisection for g^N = target on a bracketing cell; `above_left` says the
// left end sits above the target
double bisect_level(const LiftedCircleMap& m, int N, double a, double b, double target,
                    bool above_left) {
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        bool above = m.iterate(mid, N) > target;
        if (above == above_left)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

// first x >= a in [a, b] with g^N(x) = level (grid scan + bisection);
// falls back to `fallback` when the grid never crosses
double first_hit(const LiftedCircleMap& m, int N, double a, double b, double level,
                 std::size_t grid, double fallback) {
    std::vector<double> xs;
    auto ys = iterate_grid(m, N, a, b, grid, &xs);
    if (ys[0] == level) return xs[0];
    bool above0 = ys[0] > level;
    for (std::size_t i = 0; i + 1 <= grid; ++i) {
        bool above1 = ys[i + 1] > level;
        if (ys[i + 1] == level) return xs[i + 1];
        if (above1 != above0) return bisect_level(m, N, xs[i], xs[i + 1], level, above0);
        above0 = above1;
    }
    return fallback;
}

// last x <= b in [a, b] with g^N(x) = level
double last_hit(const LiftedCircleMap& m, int N, double a, double b, double level,
                std::size_t grid, double fallback) {
    std::vector<double> xs;
    auto ys = iterate_grid(m, N, a, b, grid, &xs);
    if (ys[grid] == level) return xs[grid];
    for (std::size_t i = grid; i-- > 0;) {
        if (ys[i] == level) return xs[i];
        bool above0 = ys[i] > level;
        bool above1 = ys[i + 1] > level;
        if (above1 != above0) return bisect_level(m, N, xs[i], xs[i + 1], level, above0);
    }
    return fallback;
}

void check_relation(const LiftedCircleMap& m, const HorseshoeCover& h, int sym,
                    double tol) {
    const Interval& I = h.interval(sym);
    double lo_img = m.iterate(I.lo, h.N);
    double hi_img = m.iterate(I.hi, h.N);
    auto base = static_cast<double>(h.phi_addr(sym));
    double want_lo = base, want_hi = base + 1.0;
    double err = std::min(std::abs(lo_img - want_lo) + std::abs(hi_img - want_hi),
                          std::abs(lo_img - want_hi) + std::abs(hi_img - want_lo));
    if (err > 2.0 * tol)
        throw NumericError("horseshoe covering relation failed for symbol " +
                           symbol_name(sym) + " (endpoint error " + std::to_string(err) +
                           ")");
}

}  // namespace

std::string symbol_name(int sym) {
    switch (sym) {
        case kSymA: return "a";
        case kSymB: return "b";
        case kSymC: return "c";
        default: return std::to_string(sym);
    }
}

int parse_symbol(const std::string& name) {
    if (name == "a") return kSymA;
    if (name == "b") return kSymB;
    if (name == "c") return kSymC;
    try {
        std::size_t pos = 0;
        int v = std::stoi(name, &pos);
        if (pos != name.size() || v < 0) throw SpecError("bad symbol: " + name);
        return v;
    } catch (const std::exception&) {
        throw SpecError("bad symbol: " + name);
    }
}

std::vector<int> HorseshoeCover::alphabet() const {
    std::vector<int> out;
    out.reserve(intervals.size());
    for (const auto& [sym, iv] : intervals) out.push_back(sym);
    return out;
}

const Interval& HorseshoeCover::interval(int sym) const {
    for (const auto& [s, iv] : intervals)
        if (s == sym) return iv;
    throw SpecError("symbol " + symbol_name(sym) + " not in alphabet");
}

std::int64_t HorseshoeCover::phi_addr(int sym) const {
    switch (sym) {
        case kSymA:
        case kSymB: return K - 1;
        case kSymC: return K;
        default:
            if (sym < 0 || sym >= (std::int64_t{1} << N))
                throw SpecError("symbol " + symbol_name(sym) + " not in alphabet");
            return sym;
    }
}

bool HorseshoeCover::nontrivial_tail(const std::vector<int>& word) const {
    if (word.empty()) return false;
    int top = static_cast<int>((std::int64_t{1} << N) - 1);
    int e1 = top, e2 = 0;
    if (has_fold_letters && K == 0) e2 = kSymA;
    if (has_fold_letters && K == top) e1 = kSymC;
    int last = word.back();
    return last != e1 && last != e2;
}

HorseshoeCover build_horseshoe(const PreimageSolver& ps, const FoldWitness& w,
                               HorseshoeOptions opts) {
    const auto& m = ps.evaluator().map();
    auto p = ps.dyadic_preimages(w.N);
    auto cells = (std::int64_t{1} << w.N);
    if (w.K < 0 || w.K >= cells) throw SpecError("build_horseshoe: witness K out of range");

    HorseshoeCover h;
    h.N = w.N;
    h.K = w.K;
    h.has_fold_letters = true;

    auto tgt = [](std::int64_t v) { return static_cast<double>(v); };
    const double pl = w.p_left, pr = w.p_right;
    const std::size_t g = opts.cell_grid;

    // I_a in [p_left, x_hat]: last K-hit before the first (K-1)-hit
    double a2 = first_hit(m, w.N, pl, w.x_hat, tgt(w.K - 1), g, w.x_hat);
    double a1 = last_hit(m, w.N, pl, a2, tgt(w.K), g, pl);
    // I_b in [x_hat, p_right]: last (K-1)-hit before the first K-hit
    double b2 = first_hit(m, w.N, w.x_hat, pr, tgt(w.K), g, pr);
    double b1 = last_hit(m, w.N, w.x_hat, b2, tgt(w.K - 1), g, w.x_hat);
    // I_c in [b2, p_right]: last K-hit before the first (K+1)-hit
    double c2 = first_hit(m, w.N, b2, pr, tgt(w.K + 1), g, pr);
    double c1 = last_hit(m, w.N, b2, c2, tgt(w.K), g, b2);

    for (std::int64_t k = 0; k < cells; ++k) {
        if (k == w.K) {
            h.intervals.push_back({kSymA, {a1, a2}});
            h.intervals.push_back({kSymB, {b1, b2}});
            h.intervals.push_back({kSymC, {c1, c2}});
        } else {
            h.intervals.push_back({static_cast<int>(k),
                                   {p[static_cast<std::size_t>(k)],
                                    p[static_cast<std::size_t>(k) + 1]}});
        }
    }
    for (const auto& [sym, iv] : h.intervals) {
        if (!(iv.lo < iv.hi))
            throw NumericError("horseshoe interval " + symbol_name(sym) + " is degenerate");
        check_relation(m, h, sym, opts.verify_tol);
    }
    return h;
}

HorseshoeCover dyadic_cover(const PreimageSolver& ps, int N, HorseshoeOptions opts) {
    const auto& m = ps.evaluator().map();
    auto p = ps.dyadic_preimages(N);
    HorseshoeCover h;
    h.N = N;
    h.K = -1;
    h.has_fold_letters = false;
    auto cells = (std::int64_t{1} << N);
    for (std::int64_t k = 0; k < cells; ++k)
        h.intervals.push_back({static_cast<int>(k),
                               {p[static_cast<std::size_t>(k)],
                                p[static_cast<std::size_t>(k) + 1]}});
    for (const auto& [sym, iv] : h.intervals) check_relation(m, h, sym, opts.verify_tol);
    return h;
}

double verify_cover(const HorseshoeCover& h, const LiftedCircleMap& m) {
    double worst = 0.0;
    for (const auto& [sym, iv] : h.intervals) {
        double lo_img = m.iterate(iv.lo, h.N);
        double hi_img = m.iterate(iv.hi, h.N);
        auto base = static_cast<double>(h.phi_addr(sym));
        double err = std::min(
            std::max(std::abs(lo_img - base), std::abs(hi_img - (base + 1.0))),
            std::max(std::abs(lo_img - (base + 1.0)), std::abs(hi_img - base)));
        worst = std::max(worst, err);
    }
    return worst;
}

namespace {

// Interval J' in T with g^N(J') inside J and endpoints on J's boundary.
// The target can be exponentially narrower than T, so whenever no grid
// sample lands strictly inside J the search zooms into the cell whose
// image brackets J's midpoint and re-grids it.
Interval pull_back(const LiftedCircleMap& m, int N, Interval T, Interval J,
                   std::size_t grid, std::size_t stage) {
    double a = T.lo, b = T.hi;
    double mid = 0.5 * (J.lo + J.hi);
    for (int zoom = 0; zoom <= 8; ++zoom) {
        std::vector<double> xs;
        auto ys = iterate_grid(m, N, a, b, grid, &xs);
        std::size_t best = ys.size();
        double best_margin = 0.0;
        for (std::size_t k = 0; k < ys.size(); ++k) {
            double margin = std::min(ys[k] - J.lo, J.hi - ys[k]);
            if (margin > best_margin) {
                best_margin = margin;
                best = k;
            }
        }
        if (best != ys.size()) {
            double u = a, v = b;
            for (std::size_t k = best; k-- > 0;) {
                if (ys[k] <= J.lo || ys[k] >= J.hi) {
                    double level = ys[k] <= J.lo ? J.lo : J.hi;
                    u = bisect_level(m, N, xs[k], xs[k + 1], level, ys[k] > level);
                    break;
                }
            }
            for (std::size_t k = best + 1; k < ys.size(); ++k) {
                if (ys[k] <= J.lo || ys[k] >= J.hi) {
                    double level = ys[k] <= J.lo ? J.lo : J.hi;
                    v = bisect_level(m, N, xs[k - 1], xs[k], level, ys[k - 1] > level);
                    break;
                }
            }
            return {u, v};
        }
        // zoom into a cell whose image brackets the target midpoint
        std::size_t cell = ys.size();
        for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
            if ((ys[k] <= mid && mid <= ys[k + 1]) ||
                (ys[k + 1] <= mid && mid <= ys[k])) {
                cell = k;
                break;
            }
        }
        if (cell == ys.size()) break;
        a = xs[cell];
        b = xs[cell + 1];
    }
    throw NumericError("coded_point: empty pullback at stage " + std::to_string(stage) +
                       " (covering relation violated)");
}

}  // namespace

CodedInterval coded_point(const HorseshoeCover& h, const LiftedCircleMap& m,
                          const std::vector<int>& word, std::size_t grid) {
    if (word.empty()) throw SpecError("coded_point: word must have length >= 1");
    const double scale = std::ldexp(1.0, h.N);
    if (static_cast<double>(word.size()) * h.N > 50)
        throw SpecError("coded_point: word too long for exact integer offsets");

    // stage targets T_i = I_{s_i} + c_i with c_{i+1} = 2^N c_i + phi_addr(s_i)
    std::vector<Interval> targets(word.size());
    double c = 0.0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const Interval& base = h.interval(word[i]);
        targets[i] = {base.lo + c, base.hi + c};
        c = c * scale + static_cast<double>(h.phi_addr(word[i]));
    }

    CodedInterval out;
    Interval J = targets.back();
    out.stage_widths.push_back(J.width());
    for (std::size_t i = word.size() - 1; i-- > 0;) {
        J = pull_back(m, h.N, targets[i], J, grid, i);
        out.stage_widths.push_back(J.width());
    }
    std::reverse(out.stage_widths.begin(), out.stage_widths.end());
    out.interval = J;
    return out;
}

double verify_coded(const HorseshoeCover& h, const LiftedCircleMap& m,
                    const std::vector<int>& word, const Interval& J,
                    std::size_t samples) {
    double scale = std::ldexp(1.0, h.N);
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        double x = J.lo + (J.hi - J.lo) * static_cast<double>(s) /
                              static_cast<double>(samples - 1);
        double c = 0.0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            const Interval& base = h.interval(word[i]);
            double lo = base.lo + c, hi = base.hi + c;
            double d = std::max({lo - x, x - hi, 0.0});
            worst = std::max(worst, d);
            c = c * scale + static_cast<double>(h.phi_addr(word[i]));
            x = m.iterate(x, h.N);
        }
    }
    return worst;
}

}  // namespace circledyn
