#pragma once

// Locally-eventually-onto probe: iterate a grid discretization of an
// interval U and report the first n at which the image spans a full unit
// interval (then g^n(U) is the whole circle). Absent means not achieved by
// n_max, which at finite resolution is evidence only.

#include <cstddef>
#include <optional>

#include "circledyn/circle_map.hpp"

namespace circledyn {

struct LeoOptions {
    int n_max = 25;
    std::size_t grid = 1000;
};

std::optional<int> leo_test(const LiftedCircleMap& m, double u_lo, double u_hi,
                            LeoOptions opts = {});

}  // namespace circledyn
