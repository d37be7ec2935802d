#include "picklab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "picklab/coeff.hpp"
#include "picklab/errors.hpp"
#include "picklab/gkz.hpp"
#include "picklab/json_io.hpp"
#include "picklab/kernel.hpp"
#include "picklab/pick.hpp"

namespace picklab::cli {

namespace {

using io::Json;

struct Options {
    // global
    double tol = kDefaultPsdTol;
    std::uint64_t seed = 0;
    std::string output;

    // kernel selection
    std::string kernel = "szego";
    std::size_t dim = 0;
    std::string weights = "const:1";

    // inputs
    std::string points;
    std::string candidates;
    std::string targets;
    std::string h_values;
    std::string functional;
    std::string grid;
    std::string tests;
    long x0_index = -1;

    // sizes
    std::size_t horizon = 120;
    std::size_t blocks = 10;
    std::size_t degree = 12;
    std::size_t trials = 10000;
    std::size_t terms = 60;
};

struct Outcome {
    Json payload;
    bool refutation = false;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

DiagonalWeights parse_weights(const std::string& text) {
    if (text == "gkz") return DiagonalWeights::gkz();
    if (text.rfind("const:", 0) == 0) return DiagonalWeights::constant(std::stod(text.substr(6)));
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidArgument("--weights: cannot parse \"" + item + "\"");
        }
    }
    return DiagonalWeights::explicit_list(std::move(values));
}

KernelSpec make_kernel(const Options& o, std::size_t points_dim) {
    const auto& k = o.kernel;
    if (k == "szego") return KernelSpec::szego();
    if (k == "bergman") return KernelSpec::bergman();
    if (k == "drury-arveson" || k == "drury_arveson")
        return KernelSpec::drury_arveson(o.dim ? o.dim : points_dim);
    if (k == "diagonal") return KernelSpec::diagonal(parse_weights(o.weights));
    if (k == "sb-hardy" || k == "segal_bargmann_hardy") return KernelSpec::segal_bargmann_hardy();
    throw InvalidArgument("unknown kernel \"" + k + "\" (see `pick-lab kernels list`)");
}

PointSet load_points(const std::string& path) {
    const auto j = io::read_json_file(path);
    return io::convert(path, [&] { return io::point_set_from_json(j); });
}

std::vector<Complex> load_values(const std::string& path) {
    const auto j = io::read_json_file(path);
    return io::convert(path, [&] { return io::complex_list_from_json(j); });
}

CoeffFunctional load_functional(const std::string& path) {
    const auto j = io::read_json_file(path);
    return io::convert(path, [&] { return io::functional_from_json(j); });
}

Point base_point(const Options& o, const PointSet& pts) {
    if (o.x0_index >= 0) {
        if (static_cast<std::size_t>(o.x0_index) >= pts.size()) throw InvalidArgument("--x0-index out of range");
        return pts[static_cast<std::size_t>(o.x0_index)];
    }
    if (pts.base_index()) return pts[*pts.base_index()];
    throw InvalidArgument("no base point: pass --x0-index or set base_index in the point file");
}

Json point_json(const Point& p) {
    Json coords = Json::array();
    for (const auto& c : p.coords) coords.push_back(io::to_json(c));
    return coords;
}

std::string rational_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// ------------------------------------------------------------ commands

Outcome cmd_kernels_list(const Options&) {
    Json list = Json::array();
    list.push_back({{"name", "szego"}, {"formula", "1/(1 - z conj(w))"}, {"domain", "|z| < 1"}});
    list.push_back({{"name", "bergman"}, {"formula", "1/(1 - z conj(w))^2"}, {"domain", "|z| < 1"}});
    list.push_back({{"name", "drury-arveson"}, {"formula", "1/(1 - <z, w>)"}, {"domain", "|z| < 1 in C^d"}});
    list.push_back({{"name", "diagonal"},
                    {"formula", "sum_n a_n (z conj(w))^n"},
                    {"domain", "|z| < 1"},
                    {"weights", "gkz | const:C | a0,a1,..."}});
    list.push_back({{"name", "sb-hardy"},
                    {"formula", "exp(z1 conj(w1)) / (1 - z2 conj(w2))"},
                    {"domain", "z1 in C, |z2| < 1"}});
    return {{{"kernels", std::move(list)}}, false};
}

Outcome cmd_gram(const Options& o) {
    const auto pts = load_points(o.points);
    const auto spec = make_kernel(o, pts.dim());
    const auto k = gram(spec, pts);
    const auto check = check_psd(k, o.tol);
    return {{{"kernel", spec.name()},
             {"n_points", pts.size()},
             {"gram", io::to_json(k)},
             {"min_eig", check.min_eig},
             {"psd", check.psd},
             {"tol", o.tol}},
            false};
}

Outcome cmd_cnp(const Options& o) {
    const auto pts = load_points(o.points);
    const auto spec = make_kernel(o, pts.dim());
    const auto v = complete_pick_verdict(spec, pts, base_point(o, pts), o.tol);
    return {io::verdict_report(spec, pts.size(), v), !v.psd};
}

Outcome cmd_cnp_basepoints(const Options& o) {
    const auto pts = load_points(o.points);
    const auto cands = load_points(o.candidates);
    const auto spec = make_kernel(o, pts.dim());
    const auto verdicts = base_point_verdicts(spec, pts, cands.points(), o.tol);
    const auto n_all = pts.merged_with(cands.points()).size();
    Json arr = Json::array();
    bool any_refuted = false;
    bool agree = true;
    for (const auto& v : verdicts) {
        arr.push_back(io::verdict_report(spec, n_all, v));
        any_refuted = any_refuted || !v.psd;
        agree = agree && v.psd == verdicts.front().psd;
    }
    return {{{"kernel", spec.name()}, {"n_points", n_all}, {"agree", agree}, {"verdicts", std::move(arr)}},
            any_refuted};
}

Outcome cmd_feature_map(const Options& o) {
    const auto pts = load_points(o.points);
    const auto spec = make_kernel(o, pts.dim());
    const auto x0 = base_point(o, pts);
    const auto fm = feature_map(cnp_defect(spec, pts, x0), o.tol);

    const auto nk = normalize(spec, pts, x0);
    const auto rebuilt = fm.kernel();
    double max_rel = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const Complex expected = nk(pts[i], pts[j]);
            max_rel = std::max(max_rel, std::abs(rebuilt(i, j) - expected) / std::abs(expected));
        }
    }

    Json rows = Json::array();
    for (Eigen::Index i = 0; i < fm.rows.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < fm.rows.cols(); ++c) row.push_back(io::to_json(fm.rows(i, c)));
        rows.push_back(std::move(row));
    }
    const auto geo = geometric_reconstruction(fm, o.terms);
    double geo_err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) geo_err = std::max(geo_err, std::abs(geo(i, j) - rebuilt(i, j)));

    return {{{"kernel", spec.name()},
             {"n_points", pts.size()},
             {"rank", fm.rank()},
             {"rows", std::move(rows)},
             {"max_reconstruction_rel_error", max_rel},
             {"geometric_terms", o.terms},
             {"geometric_max_residual", geo_err},
             {"tol", fm.tol_used}},
            false};
}

Outcome cmd_pick_solve(const Options& o) {
    const auto nodes = load_points(o.points);
    const auto spec = make_kernel(o, nodes.dim());
    const auto targets = load_values(o.targets);
    const auto r = pick_check(spec, nodes, targets, o.tol);
    return {{{"kernel", spec.name()},
             {"n_points", nodes.size()},
             {"feasible", r.feasible},
             {"marginal", r.marginal},
             {"min_eig", r.min_eig},
             {"tol", o.tol}},
            !r.feasible};
}

Outcome cmd_mult_norm(const Options& o) {
    const auto pts = load_points(o.points);
    const auto spec = make_kernel(o, pts.dim());
    const auto h = load_values(o.h_values);
    const double bound = multiplier_norm_lower_bound(spec, pts, h);
    double sup = 0.0;
    for (const auto& v : h) sup = std::max(sup, std::abs(v));
    return {{{"kernel", spec.name()}, {"n_points", pts.size()}, {"bound", bound}, {"max_abs_h", sup}}, false};
}

Outcome cmd_sb_hardy(const Options& o) {
    const auto L = sb_hardy_functional();
    const auto one = CoeffFunction::constant(2, 1.0);
    const auto h = CoeffFunction::variable(2, 1);
    const auto h2 = multiply(h, h);
    const Complex l1 = apply_functional(L, one);
    const Complex lh = apply_functional(L, h);
    const Complex lh2 = apply_functional(L, h2);
    const double defect = multiplicativity_defect(L, h, h);

    const auto spec = KernelSpec::segal_bargmann_hardy();
    const Point origin{0.0, 0.0};
    double normalization_residual = 0.0;
    for (const Point& x : {Point{0.3, 0.2}, Point{Complex(-2.0, 1.5), Complex(0.1, -0.7)}, Point{5.0, 0.9}})
        normalization_residual = std::max(normalization_residual, std::abs(eval_kernel(spec, x, origin) - 1.0));

    double isometry = 0.0;
    for (const auto& f : {one, h, CoeffFunction::variable(2, 0), h2})
        isometry = std::max(isometry, isometry_check_mz2(f));

    return {{{"space", "segal_bargmann_hardy"},
             {"functional", io::to_json(L)},
             {"lambda_one", io::to_json(l1)},
             {"lambda_h", io::to_json(lh)},
             {"lambda_h2", io::to_json(lh2)},
             {"defect", defect},
             {"kernel_normalization_residual", normalization_residual},
             {"mz2_isometry_residual", isometry}},
            defect > o.tol};
}

Outcome cmd_gkz_weights(const Options& o) {
    const auto r = check_sequence_properties(o.horizon);
    Json weights = Json::array();
    for (std::size_t n = 0; n <= std::min<std::size_t>(o.horizon, 49); ++n) weights.push_back(gkz_weight(n).str());
    const bool ok = r.ratios_le_one && r.root_bracket_ok;
    return {{{"sequence", "a_n = k! for k^2 <= n < (k+1)^2"},
             {"horizon", r.horizon},
             {"weights_head", std::move(weights)},
             {"ratios_le_one", r.ratios_le_one},
             {"min_ratio", rational_string(r.min_ratio)},
             {"min_ratio_value", static_cast<double>(r.min_ratio)},
             {"min_ratio_at", r.min_ratio_at},
             {"root_bracket_ok", r.root_bracket_ok}},
            !ok};
}

Outcome cmd_seq_check(const Options& o) {
    const auto r = check_sequence_properties(o.horizon);
    const bool ok = r.ratios_le_one && r.root_bracket_ok;
    return {{{"horizon", r.horizon},
             {"ratios_le_one", r.ratios_le_one},
             {"min_ratio", rational_string(r.min_ratio)},
             {"min_ratio_value", static_cast<double>(r.min_ratio)},
             {"min_ratio_at", r.min_ratio_at},
             {"root_bracket_ok", r.root_bracket_ok}},
            !ok};
}

Outcome cmd_mz_witness(const Options& o) {
    const auto w = mz_unbounded_witness(o.blocks);
    return {{{"blocks", w.blocks},
             {"norm_sq_g", w.norm_sq_g},
             {"norm_sq_g_over_z", w.norm_sq_g_over_z},
             {"terms", w.terms ? io::to_json(*w.terms) : Json(nullptr)}},
            false};
}

Outcome cmd_gkz_search(const Options& o) {
    const auto L = load_functional(o.functional);
    SearchOptions so;
    so.max_degree = o.degree;
    so.trials = o.trials;
    so.seed = o.seed;
    so.tol = o.tol;
    const auto f = gkz_dichotomy_search(L, so);
    return {io::finding_report(f), f.kind != FindingKind::no_violation_found};
}

Outcome cmd_point_eval_witness(const Options& o) {
    const auto L = load_functional(o.functional);
    const auto grid = load_points(o.grid);
    std::vector<CoeffFunction> tests;
    if (o.tests.empty()) {
        tests = default_test_functions(L.vars);
    } else {
        const auto j = io::read_json_file(o.tests);
        tests = io::convert(o.tests, [&] {
            std::vector<CoeffFunction> out;
            for (const auto& f : j.at("functions")) out.push_back(io::coeff_function_from_json(f));
            return out;
        });
    }
    const auto x = point_eval_witness(L, tests, grid.points(), o.tol);
    return {{{"n_grid", grid.size()},
             {"n_tests", tests.size()},
             {"witness", x ? point_json(*x) : Json(nullptr)},
             {"tol", o.tol}},
            false};
}

void add_kernel_options(CLI::App* sub, Options& o) {
    sub->add_option("--kernel", o.kernel, "szego | bergman | drury-arveson | diagonal | sb-hardy")
        ->capture_default_str();
    sub->add_option("--dim", o.dim, "Drury-Arveson dimension (default: point-file dim)");
    sub->add_option("--weights", o.weights, "diagonal weights: gkz | const:C | a0,a1,...")->capture_default_str();
    sub->add_option("--points", o.points, "point-set JSON file")->required()->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    if (const char* env = std::getenv("PICKLAB_TOL")) {
        try {
            o.tol = std::stod(env);
        } catch (const std::exception&) {
            err << "pick-lab: PICKLAB_TOL is not a number: " << env << "\n";
            return kExitError;
        }
    }

    CLI::App app{"pick-lab: finite-sample complete Pick kernel laboratory", "pick-lab"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol", o.tol, "tolerance (default 1e-9, env PICKLAB_TOL)");
    app.add_option("--seed", o.seed, "random seed")->capture_default_str();
    app.add_option("-o,--output", o.output, "write the JSON report to this file");

    std::string command;
    std::function<Outcome(const Options&)> handler;
    const auto bind = [&](CLI::App* sub, std::string name, Outcome (*fn)(const Options&)) {
        sub->callback([&command, &handler, name = std::move(name), fn] {
            command = name;
            handler = fn;
        });
    };

    auto* kernels = app.add_subcommand("kernels", "kernel families");
    kernels->require_subcommand(1);
    bind(kernels->add_subcommand("list", "list kernel families"), "kernels list", cmd_kernels_list);

    auto* g = app.add_subcommand("gram", "Gram matrix of a kernel on a point set");
    add_kernel_options(g, o);
    bind(g, "gram", cmd_gram);

    auto* cnp = app.add_subcommand("cnp", "complete Pick defect test at one base point");
    add_kernel_options(cnp, o);
    cnp->add_option("--x0-index", o.x0_index, "index of the base point in the point file");
    bind(cnp, "cnp", cmd_cnp);

    auto* cnpb = app.add_subcommand("cnp-basepoints", "complete Pick verdicts across candidate base points");
    add_kernel_options(cnpb, o);
    cnpb->add_option("--candidates", o.candidates, "point-set JSON of candidate base points")
        ->required()
        ->check(CLI::ExistingFile);
    bind(cnpb, "cnp-basepoints", cmd_cnp_basepoints);

    auto* fmap = app.add_subcommand("feature-map", "feature vectors b(x) of the defect matrix");
    add_kernel_options(fmap, o);
    fmap->add_option("--x0-index", o.x0_index, "index of the base point in the point file");
    fmap->add_option("--terms", o.terms, "geometric reconstruction order")->capture_default_str();
    bind(fmap, "feature-map", cmd_feature_map);

    auto* pick = app.add_subcommand("pick-solve", "Pick interpolation feasibility");
    add_kernel_options(pick, o);
    pick->add_option("--targets", o.targets, "JSON {\"values\": [...]} of targets")->required()->check(CLI::ExistingFile);
    bind(pick, "pick-solve", cmd_pick_solve);

    auto* mult = app.add_subcommand("mult-norm", "multiplier norm lower bound");
    add_kernel_options(mult, o);
    mult->add_option("--h-values", o.h_values, "JSON {\"values\": [...]} of h(x_i)")
        ->required()
        ->check(CLI::ExistingFile);
    bind(mult, "mult-norm", cmd_mult_norm);

    auto* ce = app.add_subcommand("counterexample", "explicit constructions");
    ce->require_subcommand(1);
    bind(ce->add_subcommand("sb-hardy", "Segal-Bargmann x Hardy functional a00 + a01"), "counterexample sb-hardy",
         cmd_sb_hardy);
    auto* cew = ce->add_subcommand("gkz-weights", "weights a_n = k! for k^2 <= n < (k+1)^2");
    cew->add_option("--horizon", o.horizon, "largest n")->capture_default_str();
    bind(cew, "counterexample gkz-weights", cmd_gkz_weights);
    auto* cem = ce->add_subcommand("mz-witness", "M_z not bounded below on the gkz-weighted space");
    cem->add_option("--blocks", o.blocks, "number of blocks K")->capture_default_str();
    bind(cem, "counterexample mz-witness", cmd_mz_witness);

    auto* search = app.add_subcommand("gkz-search", "search for an annihilated cyclic polynomial or a violation");
    search->add_option("--functional", o.functional, "functional JSON file")->required()->check(CLI::ExistingFile);
    search->add_option("--degree", o.degree, "degree cap N")->capture_default_str();
    search->add_option("--trials", o.trials, "random trials")->capture_default_str();
    bind(search, "gkz-search", cmd_gkz_search);

    auto* pew = app.add_subcommand("point-eval-witness", "find a grid point the functional evaluates at");
    pew->add_option("--functional", o.functional, "functional JSON file")->required()->check(CLI::ExistingFile);
    pew->add_option("--grid", o.grid, "point-set JSON grid")->required()->check(CLI::ExistingFile);
    pew->add_option("--tests", o.tests, "JSON {\"functions\": [...]} of test functions")->check(CLI::ExistingFile);
    bind(pew, "point-eval-witness", cmd_point_eval_witness);

    auto* seq = app.add_subcommand("seq-check", "check properties of the gkz weight sequence");
    seq->add_option("--horizon", o.horizon, "largest n")->required();
    bind(seq, "seq-check", cmd_seq_check);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "pick-lab: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }

    try {
        if (!(o.tol > 0.0)) throw InvalidArgument("--tol must be positive");
        Outcome res = handler(o);
        Json report = {{"command", command}, {"refutation", res.refutation}, {"timestamp", utc_timestamp()}};
        for (auto& [key, value] : res.payload.items()) report[key] = std::move(value);
        const std::string text = report.dump(2) + "\n";
        if (o.output.empty()) {
            out << text;
        } else {
            std::ofstream file(o.output, std::ios::binary);
            if (!file) throw Error("cannot write " + o.output);
            file << text;
        }
        return res.refutation ? kExitRefuted : kExitOk;
    } catch (const std::exception& e) {
        err << "pick-lab: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace picklab::cli
