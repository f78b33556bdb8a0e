#include "circledyn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "circledyn/alpha_analysis.hpp"
#include "circledyn/errors.hpp"
#include "circledyn/fold.hpp"
#include "circledyn/horseshoe.hpp"
#include "circledyn/leo.hpp"
#include "circledyn/map_spec.hpp"
#include "circledyn/preimage.hpp"
#include "circledyn/semiconjugacy.hpp"
#include "circledyn/variation.hpp"

namespace circledyn::cli {

namespace {

using nlohmann::json;

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw SpecError("cannot open output file " + out_path);
    f << text;
}

json witness_json(const FoldWitness& w) {
    return {{"found", true},   {"N", w.N},
            {"K", w.K},        {"x_hat", w.x_hat},
            {"p_left", w.p_left}, {"p_right", w.p_right},
            {"residual", w.residual}};
}

struct FoldResult {
    LiftedCircleMap normalized;
    std::optional<FoldWitness> witness;
    PreimageSolver solver;
};

FoldResult run_fold_search(const LiftedCircleMap& m, double tol, int depth_cap,
                           int n_max) {
    auto e = SemiconjugacyEvaluator::make(m, tol, depth_cap);
    auto normalized = normalize(e);
    auto en = SemiconjugacyEvaluator::make(normalized, tol, depth_cap);
    PreimageSolver ps(en);
    auto w = find_fold(ps, FoldOptions{.n_max = n_max});
    return {std::move(normalized), w, std::move(ps)};
}

json analyze_to_json(const LiftedCircleMap& m, const PipelineOptions& po) {
    json rep;
    rep["map"] = json::parse(map_spec_to_json(m));
    rep["kernel"] = kernels::active_kernel_name();

    auto e = SemiconjugacyEvaluator::make(m, po.tol, po.depth_cap);
    rep["depth_used"] = e.depth();
    rep["tail_bound"] = e.tail_bound();
    rep["depth_capped"] = e.capped();
    rep["requested_tol"] = e.requested_tolerance();

    bool monotone = m.strictly_increasing(po.monotone_grid);
    rep["lift_monotone"] = monotone;

    std::optional<FoldWitness> w;
    if (monotone) {
        rep["fold"] = {{"found", false}, {"n_max", po.fold_nmax}};
    } else {
        auto fr = run_fold_search(m, po.tol, po.depth_cap, po.fold_nmax);
        w = fr.witness;
        rep["fold"] = w ? witness_json(*w)
                        : json{{"found", false}, {"n_max", po.fold_nmax}};
    }

    auto ent = entropy_from_variation(m, po.ent_nmin, po.ent_nmax, po.piece_cap);
    rep["entropy"] = {{"variation_rate", ent.variation_rate},
                      {"window", {ent.n_lo, ent.n_hi}},
                      {"residual", ent.residual},
                      {"cap_hit", ent.cap_hit},
                      {"hs_lb", w ? json(entropy_lower_bound(*w)) : json()}};

    int jmax = po.profile_jmax;
    if (w) jmax = std::max(1, std::min(jmax, 24 / w->N));
    auto prof = variation_profile_alpha(e, jmax, w);
    json pj = {{"M", prof.M},
               {"depths", prof.depths},
               {"values", prof.values},
               {"ratios", prof.ratios}};
    if (w) {
        pj["bound_rate"] = prof.bound_rate;
        pj["bound_ok"] = prof.bound_ok;
    }
    rep["variation_profile"] = pj;

    auto thetas = sample_thetas(po.seed, po.theta_samples);
    json counts = json::array();
    std::vector<std::vector<int>> per_res(po.fiber_resolutions.size());
    double gap = 0.0;
    for (double th : thetas) {
        auto fr = fiber_components(e, th, po.fiber_resolutions);
        counts.push_back(fr.component_counts);
        gap = fr.gap_threshold;
        for (std::size_t i = 0; i < per_res.size(); ++i)
            per_res[i].push_back(fr.component_counts[i]);
    }
    json medians = json::array();
    for (auto& v : per_res) medians.push_back(median_count(v));
    rep["fibers"] = {{"seed", po.seed},
                     {"gap_threshold", gap},
                     {"resolutions", po.fiber_resolutions},
                     {"thetas", thetas},
                     {"counts", counts},
                     {"medians", medians}};

    if (po.with_box_dimension) {
        auto bd = box_dimension_graph(e, po.box_depths);
        rep["box_dimension"] = {{"depths", bd.depths},
                                {"counts", bd.counts},
                                {"dimension", bd.dimension},
                                {"residual", bd.residual}};
    }
    return rep;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",;\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SweepRow compute_sweep_row(double b, double omega, const PipelineOptions& po) {
    SweepRow row;
    row.b = b;
    row.omega = omega;
    try {
        LiftedCircleMap m(2, PeriodicPart::standard(b, omega));
        auto e = SemiconjugacyEvaluator::make(m, po.tol, po.depth_cap);
        row.depth_used = e.depth();
        row.tail_bound = e.tail_bound();
        row.lift_monotone = m.strictly_increasing(po.monotone_grid);

        std::optional<FoldWitness> w;
        if (!row.lift_monotone) {
            auto fr = run_fold_search(m, po.tol, po.depth_cap, po.fold_nmax);
            w = fr.witness;
        }
        if (w) {
            row.fold_N = w->N;
            row.fold_K = w->K;
            row.entropy_hs_lb = entropy_lower_bound(*w);
        }

        auto ent = entropy_from_variation(m, po.ent_nmin, po.ent_nmax, po.piece_cap);
        row.entropy_var = ent.variation_rate;

        int jmax = po.profile_jmax;
        if (w) jmax = std::max(1, std::min(jmax, 24 / w->N));
        auto prof = variation_profile_alpha(e, jmax, w);
        row.var_alpha_at_depth_j = prof.values;

        auto thetas = sample_thetas(po.seed, po.theta_samples);
        std::vector<int> finest;
        for (double th : thetas) {
            auto fr = fiber_components(e, th, {po.fiber_resolutions.back()});
            finest.push_back(fr.component_counts.back());
        }
        row.fiber_count_median = median_count(finest);
    } catch (const std::exception& ex) {
        row.error = ex.what();
    }
    return row;
}

std::string sweep_row_csv_header() {
    return "b,omega,lift_monotone,fold_N,fold_K,entropy_hs_lb,entropy_var,"
           "var_alpha_at_depth_j,fiber_count_median,depth_used,tail_bound,error";
}

std::string sweep_row_to_csv(const SweepRow& r) {
    std::ostringstream os;
    os << format17(r.b) << ',' << format17(r.omega) << ','
       << (r.lift_monotone ? "true" : "false") << ',';
    if (r.fold_N) os << *r.fold_N;
    os << ',';
    if (r.fold_K) os << *r.fold_K;
    os << ',';
    if (r.entropy_hs_lb) os << format17(*r.entropy_hs_lb);
    os << ',';
    if (r.entropy_var) os << format17(*r.entropy_var);
    os << ',';
    for (std::size_t i = 0; i < r.var_alpha_at_depth_j.size(); ++i) {
        if (i > 0) os << ';';
        os << format17(r.var_alpha_at_depth_j[i]);
    }
    os << ',';
    if (r.fiber_count_median) os << *r.fiber_count_median;
    os << ',' << r.depth_used << ',' << format17(r.tail_bound) << ','
       << csv_escape(r.error);
    return os.str();
}

namespace {

std::vector<double> linspace(double a, double b, int steps) {
    if (steps < 1) throw SpecError("sweep: steps must be >= 1");
    std::vector<double> out;
    if (steps == 1) {
        out.push_back(a);
        return out;
    }
    for (int i = 0; i < steps; ++i)
        out.push_back(a + (b - a) * static_cast<double>(i) / (steps - 1));
    return out;
}

struct CommonFlags {
    std::string spec_path;
    std::string out_path;
    std::string format;
    double tol = 1e-12;
    int depth = -1;  // -1: derive from tol
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonFlags& cf, bool needs_spec = true) {
    auto* o = cmd->add_option("--spec", cf.spec_path, "map specification file (JSON)");
    if (needs_spec) o->required();
    cmd->add_option("--out", cf.out_path, "output file (default: stdout)");
    cmd->add_option("--format", cf.format, "output format");
    cmd->add_option("--tol", cf.tol, "series tolerance for the evaluator depth");
    cmd->add_option("--depth", cf.depth, "explicit series depth (overrides --tol)");
    cmd->add_option("--seed", cf.seed, "seed for any sampling (logged in output)");
}

SemiconjugacyEvaluator make_evaluator(const LiftedCircleMap& m, const CommonFlags& cf) {
    if (cf.depth >= 0) return {m, cf.depth};
    return SemiconjugacyEvaluator::make(m, cf.tol);
}

void require_format(const CommonFlags& cf, std::initializer_list<const char*> allowed) {
    if (cf.format.empty()) return;
    for (const char* a : allowed)
        if (cf.format == a) return;
    throw SpecError("unsupported --format \"" + cf.format + "\" for this command");
}

int run_impl(const std::vector<std::string>& args) {
    CLI::App app{"circledyn: semiconjugacy and complexity analysis of degree-D "
                 "circle maps"};
    app.require_subcommand(1);

    // ----- alpha ------------------------------------------------------------
    auto* alpha_cmd = app.add_subcommand("alpha", "evaluate the semiconjugacy lift");
    CommonFlags a_cf;
    add_common(alpha_cmd, a_cf);
    std::vector<double> a_xs;
    int a_grid = 0;
    alpha_cmd->add_option("--x", a_xs, "evaluation points")->delimiter(',');
    alpha_cmd->add_option("--grid", a_grid, "evaluate at k/N for k = 0..N-1");

    // ----- fold -------------------------------------------------------------
    auto* fold_cmd = app.add_subcommand("fold", "normalize and search for a fold");
    CommonFlags f_cf;
    add_common(fold_cmd, f_cf);
    int f_nmax = 10;
    fold_cmd->add_option("--nmax", f_nmax, "largest level N to search");

    // ----- horseshoe ----------------------------------------------------------
    auto* hs_cmd = app.add_subcommand("horseshoe",
                                      "build the (2^N+2)-interval cover from a fold");
    CommonFlags h_cf;
    add_common(hs_cmd, h_cf);
    int h_nmax = 10;
    hs_cmd->add_option("--nmax", h_nmax, "largest level N to search");

    // ----- analyze ------------------------------------------------------------
    auto* an_cmd = app.add_subcommand("analyze", "full complexity report");
    CommonFlags an_cf;
    add_common(an_cmd, an_cf);
    PipelineOptions an_po;
    an_cmd->add_option("--nmax", an_po.fold_nmax, "fold search depth");
    an_cmd->add_option("--ent-window", an_po.ent_nmin,
                       "entropy regression window start");
    an_cmd->add_option("--ent-window-end", an_po.ent_nmax,
                       "entropy regression window end");
    an_cmd->add_option("--piece-cap", an_po.piece_cap, "variation piece cap");
    an_cmd->add_option("--profile-depth", an_po.profile_jmax,
                       "dyadic variation profile depth");
    an_cmd->add_option("--resolutions", an_po.fiber_resolutions,
                       "fiber scan resolutions")
        ->delimiter(',');
    an_cmd->add_option("--thetas", an_po.theta_samples, "number of sampled fibers");
    an_cmd->add_option("--depths,--box-depths", an_po.box_depths,
                       "box-count dyadic depths")
        ->delimiter(',');

    // ----- sweep ------------------------------------------------------------
    auto* sw_cmd = app.add_subcommand("sweep",
                                      "standard-family parameter sweep to CSV");
    CommonFlags sw_cf;
    add_common(sw_cmd, sw_cf, /*needs_spec=*/false);
    double b0 = 0.0, b1 = 0.0, w0 = 0.0, w1 = 0.0;
    int bsteps = 1, wsteps = 1;
    sw_cmd->add_option("--b0", b0, "first b")->required();
    sw_cmd->add_option("--b1", b1, "last b");
    sw_cmd->add_option("--bsteps", bsteps, "number of b values");
    sw_cmd->add_option("--w0", w0, "first omega")->required();
    sw_cmd->add_option("--w1", w1, "last omega");
    sw_cmd->add_option("--wsteps", wsteps, "number of omega values");
    PipelineOptions sw_po;
    sw_po.fold_nmax = 4;
    sw_po.ent_nmax = 12;
    sw_po.profile_jmax = 5;
    sw_po.fiber_resolutions = {4096};
    sw_po.piece_cap = 2'000'000;
    sw_po.with_box_dimension = false;
    sw_cmd->add_option("--nmax", sw_po.fold_nmax, "fold search depth");
    sw_cmd->add_option("--thetas", sw_po.theta_samples, "number of sampled fibers");
    sw_cmd->add_option("--resolutions", sw_po.fiber_resolutions,
                       "fiber scan resolutions")
        ->delimiter(',');
    sw_cmd->add_option("--piece-cap", sw_po.piece_cap, "variation piece cap");
    bool sw_serial = false;
    sw_cmd->add_flag("--serial", sw_serial, "compute rows sequentially");

    // ----- leo --------------------------------------------------------------
    auto* leo_cmd = app.add_subcommand("leo", "locally-eventually-onto probe");
    CommonFlags l_cf;
    add_common(leo_cmd, l_cf);
    double u0 = 0.0, u1 = 0.0;
    LeoOptions l_opts;
    leo_cmd->add_option("--u0", u0, "interval left end")->required();
    leo_cmd->add_option("--u1", u1, "interval right end")->required();
    leo_cmd->add_option("--nmax", l_opts.n_max, "iteration bound");
    leo_cmd->add_option("--grid", l_opts.grid, "points discretizing U");

    // ----- fibers ------------------------------------------------------------
    auto* fib_cmd = app.add_subcommand("fibers", "fiber component counts");
    CommonFlags fib_cf;
    add_common(fib_cmd, fib_cf);
    std::vector<double> fib_thetas;
    int fib_samples = 20;
    std::vector<std::size_t> fib_res = {4096, 32768, 262144};
    fib_cmd->add_option("--theta", fib_thetas, "explicit circle points")->delimiter(',');
    fib_cmd->add_option("--samples", fib_samples, "seeded uniform theta count");
    fib_cmd->add_option("--resolutions", fib_res, "scan resolutions")->delimiter(',');

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);  // CLI11 consumes reversed argument vectors
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);  // prints help text or the parse error
        return rc == 0 ? 0 : 2;
    }

    if (app.got_subcommand(alpha_cmd)) {
        require_format(a_cf, {"csv", "json"});
        auto m = load_map_spec(a_cf.spec_path);
        auto e = make_evaluator(m, a_cf);
        std::vector<double> xs = a_xs;
        if (a_grid > 0)
            for (int k = 0; k < a_grid; ++k)
                xs.push_back(static_cast<double>(k) / a_grid);
        if (xs.empty()) throw SpecError("alpha: provide --x values or --grid N");
        std::vector<double> av(xs.size());
        e.alpha_batch(xs.data(), av.data(), xs.size());
        std::ostringstream os;
        if (a_cf.format == "json") {
            json rows = json::array();
            for (std::size_t i = 0; i < xs.size(); ++i)
                rows.push_back({{"x", xs[i]}, {"alpha", av[i]}});
            json out = {{"depth_used", e.depth()},
                        {"tail_bound", e.tail_bound()},
                        {"depth_capped", e.capped()},
                        {"rows", rows}};
            os << out.dump(2) << '\n';
        } else {
            os << "x,alpha,err_bound\n";
            for (std::size_t i = 0; i < xs.size(); ++i)
                os << format17(xs[i]) << ',' << format17(av[i]) << ','
                   << format17(e.tail_bound()) << '\n';
        }
        write_output(a_cf.out_path, os.str());
        return 0;
    }

    if (app.got_subcommand(fold_cmd)) {
        require_format(f_cf, {"json"});
        auto m = load_map_spec(f_cf.spec_path);
        auto fr = run_fold_search(m, f_cf.tol, 60, f_nmax);
        json out = fr.witness ? witness_json(*fr.witness)
                              : json{{"found", false},
                                     {"n_max", f_nmax},
                                     {"message", "none up to " + std::to_string(f_nmax)}};
        out["normalization_offset"] = fr.normalized.rotation_offset();
        write_output(f_cf.out_path, out.dump(2) + "\n");
        return 0;
    }

    if (app.got_subcommand(hs_cmd)) {
        require_format(h_cf, {"json"});
        auto m = load_map_spec(h_cf.spec_path);
        auto fr = run_fold_search(m, h_cf.tol, 60, h_nmax);
        json out;
        if (!fr.witness) {
            out = {{"found", false},
                   {"n_max", h_nmax},
                   {"message", "none up to " + std::to_string(h_nmax)}};
        } else {
            auto cover = build_horseshoe(fr.solver, *fr.witness);
            json ivs = json::object(), addr = json::object();
            json alphabet = json::array();
            for (const auto& [sym, iv] : cover.intervals) {
                alphabet.push_back(symbol_name(sym));
                ivs[symbol_name(sym)] = {iv.lo, iv.hi};
                addr[symbol_name(sym)] = cover.phi_addr(sym);
            }
            out = {{"found", true},
                   {"witness", witness_json(*fr.witness)},
                   {"N", cover.N},
                   {"K", cover.K},
                   {"alphabet_size", cover.alphabet_size()},
                   {"alphabet", alphabet},
                   {"intervals", ivs},
                   {"phi_addr", addr},
                   {"max_endpoint_error", verify_cover(cover, fr.normalized)}};
        }
        write_output(h_cf.out_path, out.dump(2) + "\n");
        return 0;
    }

    if (app.got_subcommand(an_cmd)) {
        require_format(an_cf, {"json"});
        auto m = load_map_spec(an_cf.spec_path);
        an_po.tol = an_cf.tol;
        an_po.seed = an_cf.seed;
        auto rep = analyze_to_json(m, an_po);
        write_output(an_cf.out_path, rep.dump(2) + "\n");
        return 0;
    }

    if (app.got_subcommand(sw_cmd)) {
        require_format(sw_cf, {"csv", "json"});
        sw_po.tol = sw_cf.tol;
        sw_po.seed = sw_cf.seed;
        auto bs = linspace(b0, b1, bsteps);
        auto ws = linspace(w0, w1, wsteps);
        std::vector<std::pair<double, double>> grid;
        for (double b : bs)
            for (double w : ws) grid.emplace_back(b, w);  // row-major: b, then omega

        std::vector<SweepRow> rows(grid.size());
        unsigned workers = sw_serial ? 1u
                                     : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));
        std::vector<std::future<void>> futs;
        for (unsigned t = 0; t < workers; ++t) {
            futs.push_back(std::async(std::launch::async, [&, t] {
                for (std::size_t i = t; i < grid.size(); i += workers)
                    rows[i] = compute_sweep_row(grid[i].first, grid[i].second, sw_po);
            }));
        }
        for (auto& f : futs) f.get();

        std::ostringstream os;
        if (sw_cf.format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json jr = {{"b", r.b},
                           {"omega", r.omega},
                           {"lift_monotone", r.lift_monotone},
                           {"var_alpha_at_depth_j", r.var_alpha_at_depth_j},
                           {"depth_used", r.depth_used},
                           {"tail_bound", r.tail_bound},
                           {"error", r.error}};
                jr["fold_N"] = r.fold_N ? json(*r.fold_N) : json();
                jr["fold_K"] = r.fold_K ? json(*r.fold_K) : json();
                jr["entropy_hs_lb"] = r.entropy_hs_lb ? json(*r.entropy_hs_lb) : json();
                jr["entropy_var"] = r.entropy_var ? json(*r.entropy_var) : json();
                jr["fiber_count_median"] =
                    r.fiber_count_median ? json(*r.fiber_count_median) : json();
                arr.push_back(jr);
            }
            os << arr.dump(2) << '\n';
        } else {
            os << sweep_row_csv_header() << '\n';
            for (const auto& r : rows) os << sweep_row_to_csv(r) << '\n';
        }
        write_output(sw_cf.out_path, os.str());
        return 0;
    }

    if (app.got_subcommand(leo_cmd)) {
        require_format(l_cf, {"json"});
        auto m = load_map_spec(l_cf.spec_path);
        auto n = leo_test(m, u0, u1, l_opts);
        json out = {{"found", n.has_value()},
                    {"n", n ? json(*n) : json()},
                    {"u", {u0, u1}},
                    {"n_max", l_opts.n_max},
                    {"grid", l_opts.grid}};
        write_output(l_cf.out_path, out.dump(2) + "\n");
        return 0;
    }

    if (app.got_subcommand(fib_cmd)) {
        require_format(fib_cf, {"csv", "json"});
        auto m = load_map_spec(fib_cf.spec_path);
        auto e = make_evaluator(m, fib_cf);
        std::vector<double> thetas = fib_thetas;
        if (thetas.empty()) thetas = sample_thetas(fib_cf.seed, fib_samples);
        std::ostringstream os;
        if (fib_cf.format == "csv") {
            os << "theta,resolution,components,gap_threshold\n";
            for (double th : thetas) {
                auto fr = fiber_components(e, th, fib_res);
                for (std::size_t i = 0; i < fib_res.size(); ++i)
                    os << format17(th) << ',' << fib_res[i] << ','
                       << fr.component_counts[i] << ',' << format17(fr.gap_threshold)
                       << '\n';
            }
        } else {
            json arr = json::array();
            double gap = 0.0;
            for (double th : thetas) {
                auto fr = fiber_components(e, th, fib_res);
                gap = fr.gap_threshold;
                arr.push_back({{"theta", th}, {"counts", fr.component_counts}});
            }
            json out = {{"seed", fib_cf.seed},
                        {"resolutions", fib_res},
                        {"gap_threshold", gap},
                        {"fibers", arr}};
            os << out.dump(2) << '\n';
        }
        write_output(fib_cf.out_path, os.str());
        return 0;
    }

    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_impl(args);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace circledyn::cli
