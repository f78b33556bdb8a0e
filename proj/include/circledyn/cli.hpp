#pragma once

// Command-line front end. Subcommands: alpha, fold, horseshoe, analyze,
// sweep, leo, fibers. Every command is deterministic given its flags (any
// randomness comes from a seeded generator whose seed is a flag and is
// echoed in the output). Exit codes: 0 success (including "no fold found"),
// 2 bad specification or flags, 3 numerical failure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circledyn/circle_map.hpp"

namespace circledyn::cli {

// args excludes the program name, e.g. {"alpha", "--spec", "map.json"}.
int run(const std::vector<std::string>& args);

// Pipeline knobs shared by `analyze` and `sweep` (sweep uses lighter
// defaults; see run()).
struct PipelineOptions {
    double tol = 1e-12;
    int depth_cap = 60;
    int fold_nmax = 10;
    int ent_nmin = 6;
    int ent_nmax = 14;
    std::size_t piece_cap = 10'000'000;
    int profile_jmax = 8;
    std::vector<std::size_t> fiber_resolutions = {4096, 32768, 262144};
    int theta_samples = 20;
    std::uint64_t seed = 0;
    std::vector<int> box_depths = {6, 7, 8, 9, 10, 11, 12};
    std::size_t monotone_grid = 100000;
    bool with_box_dimension = true;
};

struct SweepRow {
    double b = 0.0;
    double omega = 0.0;
    bool lift_monotone = false;
    std::optional<int> fold_N;
    std::optional<std::int64_t> fold_K;
    std::optional<double> entropy_hs_lb;
    std::optional<double> entropy_var;
    std::vector<double> var_alpha_at_depth_j;
    std::optional<int> fiber_count_median;
    int depth_used = 0;
    double tail_bound = 0.0;
    std::string error;
};

SweepRow compute_sweep_row(double b, double omega, const PipelineOptions& opts);

std::string sweep_row_csv_header();
std::string sweep_row_to_csv(const SweepRow& row);

// "%.17g": lossless round-trip of doubles in text outputs.
std::string format17(double v);

}  // namespace circledyn::cli
