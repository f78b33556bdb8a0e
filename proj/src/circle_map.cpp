#include "circledyn/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "circledyn/errors.hpp"

namespace circledyn {

namespace {

constexpr double kIntegerSafe = 9007199254740992.0;  // 2^53

double max_abs(const std::vector<double>& v, double shift = 0.0) {
    double m = 0.0;
    for (double y : v) m = std::max(m, std::abs(y + shift));
    return m;
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Sign-change positions given per-piece slopes and the breakpoint at the
// right end of each piece (wrapping across the seam at 0).
std::vector<double> slope_sign_changes(const std::vector<double>& slopes,
                                       const std::vector<double>& boundary) {
    std::vector<double> out;
    const std::size_t m = slopes.size();
    int prev = 0;
    // seed with the last nonzero sign so the seam is handled like any joint
    for (std::size_t i = m; i-- > 0;) {
        if (int s = sign_of(slopes[i]); s != 0) {
            prev = s;
            break;
        }
    }
    if (prev == 0) return out;  // constant map, no turning points
    for (std::size_t i = 0; i < m; ++i) {
        int s = sign_of(slopes[i]);
        if (s != 0 && s != prev) {
            double x = boundary[i];  // left end of piece i
            out.push_back(x >= 1.0 ? x - 1.0 : x);
            prev = s;
        } else if (s != 0) {
            prev = s;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

PeriodicPart PeriodicPart::standard(double b, double omega) {
    if (!std::isfinite(b) || !std::isfinite(omega))
        throw SpecError("standard family parameters must be finite");
    PeriodicPart p;
    p.kind_ = PhiKind::standard;
    p.b_ = b;
    p.omega_ = omega;
    return p;
}

PeriodicPart PeriodicPart::piecewise_linear(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw SpecError("piecewise-linear part needs at least 2 points");
    for (auto& [x, y] : points)
        if (!std::isfinite(x) || !std::isfinite(y))
            throw SpecError("piecewise-linear breakpoints must be finite");
    if (points.front().first != 0.0)
        throw SpecError("piecewise-linear breakpoints must start at x = 0");
    if (points.back().first != 1.0)
        throw SpecError("piecewise-linear breakpoints must end at x = 1");
    if (points.front().second != points.back().second)
        throw SpecError("piecewise-linear endpoint values at 0 and 1 must agree exactly");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1].first < points[i].first))
            throw SpecError("piecewise-linear breakpoints must be strictly increasing in x");
    PeriodicPart p;
    p.kind_ = PhiKind::piecewise_linear;
    p.xs_.reserve(points.size());
    p.ys_.reserve(points.size());
    for (auto& [x, y] : points) {
        p.xs_.push_back(x);
        p.ys_.push_back(y);
    }
    return p;
}

PeriodicPart PeriodicPart::tabulated(std::vector<double> samples) {
    if (samples.size() < 16)
        throw SpecError("tabulated part needs at least 16 samples");
    for (double s : samples)
        if (!std::isfinite(s)) throw SpecError("tabulated samples must be finite");
    PeriodicPart p;
    p.kind_ = PhiKind::tabulated;
    p.samples_ = std::move(samples);
    return p;
}

double PeriodicPart::operator()(double x) const {
    kernels::LiftParams lp;
    lp.kind = static_cast<int>(kind_);
    lp.b = b_;
    lp.omega = omega_;
    lp.xs = xs_.data();
    lp.ys = ys_.data();
    lp.n = xs_.size();
    lp.samples = samples_.data();
    lp.ns = samples_.size();
    return kernels::phi_eval(lp, x);
}

double PeriodicPart::sup_norm() const {
    switch (kind_) {
        case PhiKind::standard:
            return std::abs(omega_) + std::abs(b_);
        case PhiKind::piecewise_linear:
            return max_abs(ys_);
        default:
            return max_abs(samples_);
    }
}

double PeriodicPart::lipschitz_bound() const {
    switch (kind_) {
        case PhiKind::standard:
            return 2.0 * std::numbers::pi * std::abs(b_);
        case PhiKind::piecewise_linear: {
            double m = 0.0;
            for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
                m = std::max(m, std::abs((ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i])));
            return m;
        }
        default: {
            double m = 0.0;
            auto n = static_cast<double>(samples_.size());
            for (std::size_t i = 0; i < samples_.size(); ++i) {
                double d = samples_[(i + 1) % samples_.size()] - samples_[i];
                m = std::max(m, std::abs(d) * n);
            }
            return m;
        }
    }
}

std::vector<double> PeriodicPart::turning_points(double degree) const {
    switch (kind_) {
        case PhiKind::standard: {
            // g'(x) = D + 2*pi*b*cos(2*pi*x)
            double a = 2.0 * std::numbers::pi * b_;
            if (std::abs(a) <= degree) return {};
            double c = -degree / a;
            double x1 = std::acos(c) / (2.0 * std::numbers::pi);
            return {x1, 1.0 - x1};
        }
        case PhiKind::piecewise_linear: {
            std::vector<double> slopes, bounds;
            for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
                slopes.push_back(degree + (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]));
                bounds.push_back(xs_[i]);
            }
            return slope_sign_changes(slopes, bounds);
        }
        default: {
            std::vector<double> slopes, bounds;
            auto n = static_cast<double>(samples_.size());
            for (std::size_t i = 0; i < samples_.size(); ++i) {
                double d = samples_[(i + 1) % samples_.size()] - samples_[i];
                slopes.push_back(degree + d * n);
                bounds.push_back(static_cast<double>(i) / n);
            }
            return slope_sign_changes(slopes, bounds);
        }
    }
}

double sup_norm_phi(const PeriodicPart& p) { return p.sup_norm(); }

LiftedCircleMap::LiftedCircleMap(int degree, PeriodicPart phi, double rotation_offset)
    : degree_(degree), phi_(std::move(phi)), rotation_offset_(rotation_offset) {
    if (degree_ < 2) throw SpecError("lift degree must be an integer >= 2");
    if (!std::isfinite(rotation_offset_))
        throw SpecError("rotation offset must be finite");
    double shift = (degree_ - 1) * rotation_offset_;
    switch (phi_.kind()) {
        case PhiKind::standard:
            phi_sup_norm_ = std::abs(phi_.omega() + shift) + std::abs(phi_.b());
            break;
        case PhiKind::piecewise_linear:
            phi_sup_norm_ = max_abs(phi_.breakpoint_y(), shift);
            break;
        default:
            phi_sup_norm_ = max_abs(phi_.samples(), shift);
    }
}

kernels::LiftParams LiftedCircleMap::kernel_params() const {
    kernels::LiftParams lp;
    lp.kind = static_cast<int>(phi_.kind());
    lp.degree = static_cast<double>(degree_);
    lp.rot = rotation_offset_;
    lp.rot_shift = (degree_ - 1) * rotation_offset_;
    lp.b = phi_.b();
    lp.omega = phi_.omega();
    lp.xs = phi_.breakpoint_x().data();
    lp.ys = phi_.breakpoint_y().data();
    lp.n = phi_.breakpoint_x().size();
    lp.samples = phi_.samples().data();
    lp.ns = phi_.samples().size();
    return lp;
}

double LiftedCircleMap::phi_eval(double x) const {
    return kernels::phi_eval(kernel_params(), x);
}

double LiftedCircleMap::eval(double x) const {
    return kernels::lift_eval(kernel_params(), x);
}

double LiftedCircleMap::iterate(double x, std::int64_t n) const {
    if (n < 0) throw SpecError("iterate: n must be >= 0");
    auto lp = kernel_params();
    double y = x;
    for (std::int64_t i = 0; i < n; ++i) {
        y = kernels::lift_eval(lp, y);
        if (!std::isfinite(y) || std::abs(y) >= kIntegerSafe)
            throw NumericError("iterate: integer part of the orbit overflows double "
                               "precision at step " + std::to_string(i + 1));
    }
    return y;
}

void LiftedCircleMap::eval_batch(const double* x, double* out, std::size_t n) const {
    kernels::active_kernels().lift_batch(kernel_params(), x, out, n);
}

void LiftedCircleMap::phi_batch(const double* x, double* out, std::size_t n) const {
    kernels::active_kernels().phi_batch(kernel_params(), x, out, n);
}

void LiftedCircleMap::iterate_batch(double* y, std::size_t n, int steps) const {
    kernels::active_kernels().iterate_batch(kernel_params(), y, n, steps);
}

int LiftedCircleMap::degree_check(std::size_t grid) const {
    if (grid < 2) throw SpecError("degree_check: grid must be >= 2");
    auto lp = kernel_params();
    double first = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / static_cast<double>(grid);
        double d = kernels::lift_eval(lp, x + 1.0) - kernels::lift_eval(lp, x);
        double r = std::round(d);
        if (!std::isfinite(d) || std::abs(d - r) > 1e-9)
            throw NumericError("degree_check: g(x+1) - g(x) is not an integer at x = " +
                               std::to_string(x));
        if (i == 0)
            first = r;
        else if (r != first)
            throw NumericError("degree_check: g(x+1) - g(x) is not constant over the grid");
    }
    if (static_cast<int>(first) != degree_)
        throw NumericError("degree_check: measured degree " +
                           std::to_string(static_cast<int>(first)) +
                           " does not match declared degree " + std::to_string(degree_));
    return static_cast<int>(first);
}

LiftedCircleMap LiftedCircleMap::conjugate_by_rotation(double c) const {
    return LiftedCircleMap(degree_, phi_, rotation_offset_ + c);
}

bool LiftedCircleMap::strictly_increasing(std::size_t grid) const {
    std::vector<double> xs(grid + 1), ys(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(grid);
    eval_batch(xs.data(), ys.data(), grid + 1);
    for (std::size_t i = 0; i < grid; ++i)
        if (!(ys[i] < ys[i + 1])) return false;
    return true;
}

std::vector<double> LiftedCircleMap::turning_points() const {
    auto pts = phi_.turning_points(static_cast<double>(degree_));
    if (rotation_offset_ != 0.0) {
        // turning points of x -> g(x + c) - c sit at (t - c) mod 1
        for (double& t : pts) {
            double v = t - rotation_offset_;
            v -= std::floor(v);
            if (v >= 1.0) v = 0.0;
            t = v;
        }
        std::sort(pts.begin(), pts.end());
    }
    return pts;
}

}  // namespace circledyn
