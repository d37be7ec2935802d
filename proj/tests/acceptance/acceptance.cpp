// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "picklab/cli.hpp"
#include "picklab/coeff.hpp"
#include "picklab/errors.hpp"
#include "picklab/gkz.hpp"
#include "picklab/json_io.hpp"
#include "picklab/pick.hpp"

using namespace picklab;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

PointSet szego_points() {
    Rng rng(1001);
    return PointSet::scalar(oracle::random_disk_points(rng, 30, 0.9));
}

PointSet da_points() {
    Rng rng(1002);
    return PointSet(3, oracle::random_ball_points(rng, 20, 3, 0.9));
}

const PointSet& bergman_points() {
    static const PointSet pts = PointSet::scalar({0.5, 0.8});
    return pts;
}

Check cnp_positive() {
    Check c;
    const auto check_family = [&](const KernelSpec& spec, const PointSet& pts, const Point& x0) {
        const auto v = complete_pick_verdict(spec, pts, x0, 1e-9);
        c.require(v.psd, spec.name() + ": not psd");
        c.require(v.min_eig >= -1e-9 * v.spectral_radius, spec.name() + ": min_eig " + fmt(v.min_eig));
        double worst = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                Complex ip = 0.0;
                for (std::size_t k = 0; k < pts.dim(); ++k) ip += pts[i][k] * std::conj(pts[j][k]);
                worst = std::max(worst, std::abs(v.defect(i, j) - ip));
            }
        c.require(worst <= 1e-12, spec.name() + ": |F - <x_i,x_j>| = " + fmt(worst));
        return v.min_eig;
    };
    const double a = check_family(KernelSpec::szego(), szego_points(), Point{0.0});
    const double b = check_family(KernelSpec::drury_arveson(3), da_points(), Point{0.0, 0.0, 0.0});
    if (c.ok) c.detail = "min_eig szego " + fmt(a) + ", drury_arveson(3) " + fmt(b);
    return c;
}

Check cnp_refutation() {
    Check c;
    const auto v = complete_pick_verdict(KernelSpec::bergman(), bergman_points(), Point{0.0}, 1e-9);
    c.require(v.min_eig <= -0.02, "min_eig " + fmt(v.min_eig));
    c.require(!v.psd, "psd = true");

    const auto dir = std::filesystem::temp_directory_path() / "picklab_acceptance";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "bergman.json").string();
    std::ofstream(path) << io::to_json(PointSet::scalar({0.0, 0.5, 0.8}, 0)).dump();
    std::ostringstream out, err;
    const int code = cli::run({"pick-lab", "cnp", "--kernel", "bergman", "--points", path}, out, err);
    std::filesystem::remove_all(dir);
    c.require(code == cli::kExitRefuted, "exit code " + std::to_string(code));
    if (c.ok) c.detail = "min_eig " + fmt(v.min_eig) + ", exit code " + std::to_string(code);
    return c;
}

Check base_point_invariance_check() {
    Check c;
    const std::vector<Point> disk{Point{0.0}, Point{0.2}, Point{Complex(0.0, 0.5)}, Point{-0.35},
                                  Point{Complex(0.1, -0.1)}};
    const std::vector<Point> ball{Point{0.0, 0.0, 0.0}, Point{0.2, 0.0, 0.0}, Point{0.0, Complex(0.0, 0.3), 0.0},
                                  Point{0.1, 0.1, -0.1}, Point{0.0, 0.0, Complex(-0.4, 0.2)}};
    const auto run = [&](const KernelSpec& spec, const PointSet& pts, const std::vector<Point>& cands, bool expect) {
        const auto verdicts = base_point_verdicts(spec, pts, cands, 1e-9);
        c.require(verdicts.size() == 5, spec.name() + ": expected 5 verdicts");
        for (const auto& v : verdicts) c.require(v.psd == expect, spec.name() + ": verdicts disagree");
    };
    run(KernelSpec::szego(), szego_points(), disk, true);
    run(KernelSpec::drury_arveson(3), da_points(), ball, true);
    run(KernelSpec::bergman(), bergman_points(), disk, false);
    if (c.ok) c.detail = "szego, drury_arveson(3) all consistent; bergman all refuted";
    return c;
}

Check feature_map_round_trip() {
    Check c;
    Rng rng(1004);
    const auto pts = PointSet::scalar(oracle::random_disk_points(rng, 10, 0.9));
    const auto spec = KernelSpec::szego();
    const auto k = gram(spec, pts);
    const auto fm = feature_map(cnp_defect(spec, pts, Point{0.0}), 1e-9);
    const auto rebuilt = fm.kernel();
    double rel = 0.0, max_b = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        max_b = std::max(max_b, fm.rows.row(static_cast<Eigen::Index>(i)).squaredNorm());
        for (std::size_t j = 0; j < pts.size(); ++j) rel = std::max(rel, std::abs(rebuilt(i, j) - k(i, j)) / std::abs(k(i, j)));
    }
    c.require(rel <= 1e-10, "relative error " + fmt(rel));
    c.require(max_b < 1.0, "max |b_i|^2 = " + fmt(max_b));

    const std::size_t n_terms = 60;
    const auto geo = geometric_reconstruction(fm, n_terms);
    const auto f = fm.inner_products();
    const double eps = std::numeric_limits<double>::epsilon();
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double a = std::abs(f(i, j));
            const Complex exact = 1.0 / (1.0 - f(i, j));
            const double bound = std::pow(a, n_terms + 1) / (1.0 - a);
            // the bound is attained on the diagonal, so allow double rounding of the two sums
            const double residual = std::abs(geo(i, j) - exact);
            worst = std::max(worst, residual / (bound + 64.0 * eps * std::abs(exact)));
        }
    c.require(worst <= 1.0, "geometric residual / bound = " + fmt(worst));
    if (c.ok) c.detail = "rel err " + fmt(rel) + ", max |b|^2 " + fmt(max_b) + ", residual/bound " + fmt(worst);
    return c;
}

Check pick_vs_schwarz_pick() {
    Check c;
    Rng rng(1005);
    int compared = 0, skipped = 0, mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto z = oracle::random_disk_points(rng, 2, 0.95, 1e-3);
        const std::vector<Complex> w{rng.in_disk(1.0), rng.in_disk(1.0)};
        const auto r = pick_check(KernelSpec::szego(), PointSet::scalar(z), w, 1e-9);
        if (std::abs(r.min_eig) <= 1e-6) {
            ++skipped;
            continue;
        }
        ++compared;
        const bool feasible = pick_feasible(KernelSpec::szego(), PointSet::scalar(z), w, 1e-9);
        const bool oracle_ok = oracle::pseudo_hyperbolic(w[0], w[1]) <= oracle::pseudo_hyperbolic(z[0], z[1]);
        if (feasible != oracle_ok) ++mismatches;
    }
    c.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    c.detail = std::to_string(compared) + " compared, " + std::to_string(skipped) + " marginal skipped, " +
               std::to_string(mismatches) + " mismatches";
    return c;
}

Check multiplier_bound() {
    Check c;
    const auto spec = KernelSpec::szego();
    const double bound = multiplier_norm_lower_bound(spec, PointSet::scalar({0.2, 0.5, 0.8}), {0.2, 0.5, 0.8});
    c.require(bound >= 0.8 && bound <= 1.0 + 1e-9, "bound " + fmt(bound));

    Rng rng(1006);
    int done = 0;
    while (done < 100) {
        const auto z = oracle::random_disk_points(rng, 2 + rng.below(5), 0.9, 0.15);
        const auto pts = PointSet::scalar(z);
        if (min_eigenvalue(gram(spec, pts)) <= 1e-6) continue;
        std::vector<Complex> h;
        for (std::size_t i = 0; i < z.size(); ++i) h.push_back(rng.in_disk(1.0));
        const Complex s = rng.in_disk(3.0);
        std::vector<Complex> sh;
        for (const auto& v : h) sh.push_back(s * v);

        const double full = multiplier_norm_lower_bound(spec, pts, h);
        const double scaled = multiplier_norm_lower_bound(spec, pts, sh);
        c.require(std::abs(scaled - std::abs(s) * full) <= 1e-10 * std::max(scaled, std::abs(s) * full),
                  "scaling: " + fmt(scaled) + " vs " + fmt(std::abs(s) * full));

        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i + 1 < z.size(); ++i) keep.push_back(i);
        const double part = multiplier_norm_lower_bound(spec, pts.subset(keep), {h.begin(), h.end() - 1});
        c.require(full >= part - 1e-10, "monotonicity: " + fmt(full) + " < " + fmt(part));
        ++done;
    }
    if (c.ok) c.detail = "bound " + fmt(bound) + ", 100 scaling/monotonicity instances";
    return c;
}

Check sb_hardy_example() {
    Check c;
    const auto L = sb_hardy_functional();
    const auto h = CoeffFunction::variable(2, 1);
    const double defect = multiplicativity_defect(L, h, h);
    c.require(defect == 1.0, "defect " + fmt(defect));
    c.require(apply_functional(L, CoeffFunction::constant(2, 1.0)) == Complex(1.0), "L(1) != 1");

    Rng rng(1007);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        CoeffFunction f(2);
        const std::size_t n_terms = 1 + rng.below(15);
        for (std::size_t k = 0; k < n_terms; ++k) {
            const auto j = static_cast<unsigned>(rng.below(11));
            const auto m = static_cast<unsigned>(rng.below(11 - j));
            f.add_to(MultiIndex{j, m}, rng.in_disk(1.0));
        }
        if (f.is_zero()) continue;
        worst = std::max(worst, isometry_check_mz2(f) / space_norm(f, SpaceWeights::sb_hardy()));
    }
    c.require(worst <= 1e-12, "isometry residual " + fmt(worst));
    if (c.ok) c.detail = "defect 1, L(1) = 1, isometry residual " + fmt(worst);
    return c;
}

Check weight_sequence() {
    Check c;
    // defining inequality k^2 <= n < (k+1)^2, k counted upward
    std::size_t k = 0;
    BigInt fact = 1;
    for (std::size_t n = 0; n <= 10000; ++n) {
        while ((k + 1) * (k + 1) <= n) {
            ++k;
            fact *= k;
        }
        if (gkz_weight(n) != fact) {
            c.require(false, "a_" + std::to_string(n) + " mismatch");
            break;
        }
    }
    for (std::size_t K = 2; K <= 20; ++K) {
        const auto r = check_sequence_properties((K + 1) * (K + 1) - 1);
        c.require(r.min_ratio == Rational(1, K) && r.min_ratio_at == K * K - 1,
                  "min ratio at K = " + std::to_string(K));
        const std::size_t n = (K + 1) * (K + 1) - 1;
        c.require(Rational(gkz_weight(n), gkz_weight(n + 1)) == Rational(1, K + 1),
                  "ratio at n = " + std::to_string(n));
    }
    c.require(check_sequence_properties(10000).root_bracket_ok, "root bracket");
    if (c.ok) c.detail = "a_n exact for n <= 10^4, min ratios 1/K for K = 2..20, bracket ok";
    return c;
}

Check mz_witness_check() {
    Check c;
    const auto series = mz_witness_series(1000);
    double max_g = 0.0;
    bool increasing = true;
    std::size_t first_above_five = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        max_g = std::max(max_g, series[i].norm_sq_g);
        if (i > 0 && !(series[i].norm_sq_g_over_z > series[i - 1].norm_sq_g_over_z)) increasing = false;
        if (first_above_five == 0 && series[i].norm_sq_g_over_z > 5.0) first_above_five = i + 1;
    }
    c.require(max_g <= 1.645, "max norm_sq_g " + fmt(max_g));
    c.require(increasing, "norm_sq_g_over_z not strictly increasing");
    c.require(first_above_five >= 1 && first_above_five <= 50, "norm_sq_g_over_z never exceeds 5 for K <= 50");
    const auto w1 = mz_unbounded_witness(1), w2 = mz_unbounded_witness(2);
    c.require(w1.norm_sq_g == 1.0 && w1.norm_sq_g_over_z == 2.0, "K = 1 values");
    c.require(w2.norm_sq_g == 1.25 && w2.norm_sq_g_over_z == 2.75, "K = 2 values");
    if (c.ok) c.detail = "max norm_sq_g " + fmt(max_g) + ", exceeds 5 at K = " + std::to_string(first_above_five);
    return c;
}

Check gkz_dichotomy() {
    Check c;
    SearchOptions opt;
    opt.max_degree = 12;
    opt.trials = 10000;
    opt.seed = 0;
    const auto eval = gkz_dichotomy_search(CoeffFunctional::point_evaluation(Point{0.3}, 24), opt);
    c.require(eval.kind == FindingKind::no_violation_found, "evaluation: " + to_string(eval.kind));
    c.require(eval.trials_run == 10000, "evaluation: trials run " + std::to_string(eval.trials_run));
    c.require(eval.max_defect <= 1e-12, "evaluation: max defect " + fmt(eval.max_defect));

    const auto L = CoeffFunctional::unit_sum(1, {MultiIndex{0}, MultiIndex{1}});
    const auto f = gkz_dichotomy_search(L, opt);
    const auto one_minus_z = CoeffFunction::from_dense({1.0, -1.0});
    c.require(f.kind == FindingKind::cyclic_annihilated && f.witness_f && *f.witness_f == one_minus_z,
              "e0 + e1: expected cyclic_annihilated(1 - z)");
    c.require(multiplicativity_defect_direct(L, one_minus_z, one_minus_z) == 1.0, "e0 + e1: defect != 1");

    for (const auto& p : {CoeffFunction::constant(1, 1.0), one_minus_z,
                          multiply(one_minus_z, CoeffFunction::from_dense({2.0, -1.0}))})
        c.require(hardy_cyclic(p), "expected cyclic");
    for (const auto& p : {CoeffFunction::from_dense({1.0, -2.0}), CoeffFunction::variable(1, 0)})
        c.require(!hardy_cyclic(p), "expected non-cyclic");
    if (c.ok) c.detail = "evaluation max defect " + fmt(eval.max_defect) + "; e0 + e1 annihilates 1 - z";
    return c;
}

Check point_eval_witness_check() {
    Check c;
    const Point x0{0.5, 0.0};
    Rng rng(1011);
    auto grid = oracle::random_ball_points(rng, 200, 2, 0.95);
    grid.erase(std::remove(grid.begin(), grid.end(), x0), grid.end());
    c.require(grid.size() == 200, "grid lost points");
    const auto L = CoeffFunctional::point_evaluation(x0, 2);
    const auto tests = default_test_functions(2);
    c.require(!point_eval_witness(L, tests, grid, 1e-9).has_value(), "witness found off x0");
    grid.insert(grid.begin() + 97, x0);
    const auto w = point_eval_witness(L, tests, grid, 1e-9);
    c.require(w.has_value() && *w == x0, "planted x0 not returned");
    if (c.ok) c.detail = "none on 200-point grid; planted x0 returned";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"CNP positive family", cnp_positive},
        {"CNP refutation", cnp_refutation},
        {"Base-point invariance", base_point_invariance_check},
        {"Feature map round trip", feature_map_round_trip},
        {"Pick feasibility vs analytic oracle", pick_vs_schwarz_pick},
        {"Multiplier bound", multiplier_bound},
        {"Segal-Bargmann x Hardy counterexample", sb_hardy_example},
        {"Weight sequence exact", weight_sequence},
        {"Non-closed-range witness", mz_witness_check},
        {"GKZ dichotomy", gkz_dichotomy},
        {"Point-evaluation witness", point_eval_witness_check},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        if (!c.ok) ++failed;
        std::cout << (c.ok ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << criteria[i].first << ": " << c.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
