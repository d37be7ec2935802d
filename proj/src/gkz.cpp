#include "picklab/gkz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "picklab/errors.hpp"
#include "picklab/random.hpp"

namespace picklab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Taylor coefficient p^{(m)}(c) / m! of the ascending coefficients a.
Complex taylor_coefficient(const std::vector<Complex>& a, std::size_t m, Complex c) {
    Complex s = 0.0;
    double binom = 1.0;  // C(i, m), starting at i = m
    for (std::size_t i = m; i < a.size(); ++i) {
        if (i > m) binom = binom * static_cast<double>(i) / static_cast<double>(i - m);
        s += binom * a[i] * std::pow(c, static_cast<int>(i - m));
    }
    return s;
}

// Groups roots closer than a loose linkage radius, then keeps a group as a
// multiple root only if its spread is what an m-fold root would produce
// under rounding: (eps * |p| / |t_m|)^{1/m} with t_m the m-th Taylor
// coefficient at the centroid.
void merge_multiple_roots(const std::vector<Complex>& a, std::vector<Complex>& roots) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i;
    const auto find = [&](std::size_t i) {
        while (label[i] != i) i = label[i] = label[label[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double scale = std::max(1.0, std::max(std::abs(roots[i]), std::abs(roots[j])));
            if (std::abs(roots[i] - roots[j]) < 0.1 * scale) label[find(i)] = find(j);
        }
    }

    double coeff_norm = 0.0;
    for (const auto& c : a) coeff_norm += std::abs(c);
    const double degree = static_cast<double>(a.size() - 1);

    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < n; ++j)
            if (find(j) == i) members.push_back(j);
        const std::size_t m = members.size();
        if (m < 2) continue;

        Complex centroid = 0.0;
        for (auto j : members) centroid += roots[j];
        centroid /= static_cast<double>(m);
        double spread = 0.0;
        for (auto j : members) spread = std::max(spread, std::abs(roots[j] - centroid));

        const double t_m = std::abs(taylor_coefficient(a, m, centroid));
        if (t_m == 0.0) continue;
        const double perturbation = degree * kEps * coeff_norm * std::pow(std::max(1.0, std::abs(centroid)), degree);
        const double expected = std::pow(perturbation / t_m, 1.0 / static_cast<double>(m));
        if (spread <= 100.0 * expected) {
            for (auto j : members) roots[j] = centroid;
        }
    }
}

std::vector<Complex> product_of_factors(const std::vector<Complex>& rhos) {
    std::vector<Complex> p{1.0};
    for (const auto& rho : rhos) {
        std::vector<Complex> next(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i] += p[i];
            next[i + 1] -= rho * p[i];
        }
        p = std::move(next);
    }
    return p;
}

// Advances a nondecreasing index tuple over [0, base); false when exhausted.
bool next_multiset(std::vector<std::size_t>& idx, std::size_t base) {
    for (std::size_t pos = idx.size(); pos-- > 0;) {
        if (idx[pos] + 1 < base) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < idx.size(); ++q) idx[q] = idx[pos];
            return true;
        }
    }
    return false;
}

std::vector<Complex> dense_weights(const CoeffFunctional& L, std::size_t degree) {
    std::vector<Complex> w(degree + 1, 0.0);
    for (const auto& [idx, c] : L.weights)
        if (idx[0] <= degree) w[idx[0]] = c;
    return w;
}

// L(f) with the expansion and the sum both carried out in long double.
long double annihilation_recheck(const CoeffFunctional& L, const std::vector<Complex>& rhos) {
    using LComplex = std::complex<long double>;
    std::vector<LComplex> p{1.0L};
    for (const auto& rho : rhos) {
        std::vector<LComplex> next(p.size() + 1, 0.0L);
        const LComplex r(rho.real(), rho.imag());
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i] += p[i];
            next[i + 1] -= r * p[i];
        }
        p = std::move(next);
    }
    LComplex s = 0.0L;
    for (const auto& [idx, c] : L.weights)
        if (idx[0] < p.size()) s += LComplex(c.real(), c.imag()) * p[idx[0]];
    return std::abs(s);
}

std::optional<Violation> violation_among_powers(const CoeffFunctional& L, const CoeffFunction& f,
                                                std::size_t degree_budget, double tol) {
    const std::size_t d = std::max<std::size_t>(1, f.degree());
    const std::size_t max_total = degree_budget / d;
    for (std::size_t total = 2; total <= max_total; ++total) {
        for (std::size_t a = 1; 2 * a <= total; ++a) {
            const auto fa = power(f, static_cast<unsigned>(a));
            const auto fb = power(f, static_cast<unsigned>(total - a));
            const double defect = multiplicativity_defect(L, fa, fb);
            if (defect > tol && multiplicativity_defect_direct(L, fa, fb) > tol) return Violation{fa, fb, defect};
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<Complex> polynomial_roots(const CoeffFunction& p) {
    if (p.vars() != 1) throw InvalidArgument("polynomial_roots: one-variable polynomial required");
    if (p.is_zero()) throw ZeroPolynomialError("polynomial_roots: polynomial is identically zero");
    const auto a = p.dense();
    const std::size_t deg = a.size() - 1;
    std::vector<Complex> roots;
    if (deg == 0) return roots;

    // Companion matrix of the monic polynomial z^deg + sum (a_i / a_deg) z^i.
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -a[i] / a[deg];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success) throw NumericalError("polynomial_roots: eigensolver did not converge");
    roots.assign(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    merge_multiple_roots(a, roots);
    return roots;
}

bool hardy_cyclic(const CoeffFunction& p, double tol) {
    const auto roots = polynomial_roots(p);
    return std::all_of(roots.begin(), roots.end(), [&](const Complex& r) { return std::abs(r) >= 1.0 - tol; });
}

std::string to_string(FindingKind k) {
    switch (k) {
        case FindingKind::cyclic_annihilated: return "cyclic_annihilated";
        case FindingKind::multiplicativity_violation: return "multiplicativity_violation";
        case FindingKind::no_violation_found: return "no_violation_found";
    }
    return "unknown";
}

std::vector<Complex> candidate_factor_grid() {
    std::vector<Complex> grid;
    // Eighth roots of unity first (rho = 1 leads), then an interior ring.
    for (int k = 0; k < 8; ++k) grid.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0));
    for (int k = 0; k < 4; ++k) grid.push_back(std::polar(0.5, 2.0 * std::numbers::pi * k / 4.0));
    return grid;
}

double multiplicativity_defect_direct(const CoeffFunctional& L, const CoeffFunction& f, const CoeffFunction& g) {
    if (f.vars() != g.vars() || f.vars() != L.vars)
        throw InvalidArgument("multiplicativity_defect_direct: variable count mismatch");
    if (L.degree && f.degree() + g.degree() > *L.degree)
        throw FunctionalSupportError("multiplicativity_defect_direct: product exceeds functional degree");
    const auto weight = [&](const MultiIndex& idx) {
        const auto it = L.weights.find(idx);
        return it == L.weights.end() ? Complex{} : it->second;
    };
    Complex lfg = 0.0;
    for (const auto& [a, fa] : f.terms())
        for (const auto& [b, gb] : g.terms()) lfg += weight(a + b) * fa * gb;
    Complex lf = 0.0;
    for (const auto& [a, fa] : f.terms()) lf += weight(a) * fa;
    Complex lg = 0.0;
    for (const auto& [b, gb] : g.terms()) lg += weight(b) * gb;
    return std::abs(lfg - lf * lg);
}

Finding gkz_dichotomy_search(const CoeffFunctional& L, const SearchOptions& opt) {
    if (L.vars != 1) throw InvalidArgument("gkz search works in the one-variable Hardy space only");
    if (!(opt.tol > 0.0)) throw InvalidArgument("gkz search: tol must be positive");
    const std::size_t budget = 2 * opt.max_degree;
    if (L.degree && *L.degree < budget) {
        throw FunctionalSupportError("gkz search: functional defined up to degree " + std::to_string(*L.degree) +
                                     ", search needs degree " + std::to_string(budget));
    }

    Finding out;
    out.trials = opt.trials;
    out.seed = opt.seed;
    out.max_degree = opt.max_degree;
    out.lambda_one = apply_functional(L, CoeffFunction::constant(1, 1.0));
    out.unital = std::abs(out.lambda_one - 1.0) <= opt.tol;

    const auto w = dense_weights(L, budget);

    // Deterministic phase: products of outer factors (1 - rho z), |rho| <= 1.
    const auto grid = candidate_factor_grid();
    for (std::size_t d = 1; d <= opt.max_degree && out.candidates_checked < opt.max_candidates; ++d) {
        std::vector<std::size_t> idx(d, 0);
        do {
            if (out.candidates_checked >= opt.max_candidates) break;
            ++out.candidates_checked;
            std::vector<Complex> rhos(d);
            for (std::size_t i = 0; i < d; ++i) rhos[i] = grid[idx[i]];
            const auto p = product_of_factors(rhos);
            Complex value = 0.0;
            for (std::size_t n = 0; n < p.size(); ++n) value += w[n] * p[n];
            if (std::abs(value) > opt.tol) continue;

            const auto f = CoeffFunction::from_dense(p);
            const long double recheck = annihilation_recheck(L, rhos);
            if (!hardy_cyclic(f, opt.root_tol) || recheck > opt.tol) continue;

            out.kind = FindingKind::cyclic_annihilated;
            out.witness_f = f;
            out.annihilation = static_cast<double>(recheck);
            if (out.unital) {
                out.accompanying = violation_among_powers(L, f, budget, opt.tol);
                out.accompanying_missing = !out.accompanying.has_value();
                if (out.accompanying) out.defect = out.accompanying->defect;
            }
            return out;
        } while (next_multiset(idx, grid.size()));
    }

    // Random phase: seeded pairs with coefficients in the unit disk.
    const std::size_t len = opt.max_degree + 1;
    std::vector<Complex> fc(len), gc(len), prod(2 * len - 1);
    for (std::size_t t = 0; t < opt.trials; ++t) {
        ++out.trials_run;
        auto rng = Rng::stream(opt.seed, t);
        for (auto& c : fc) c = rng.in_disk();
        for (auto& c : gc) c = rng.in_disk();
        std::fill(prod.begin(), prod.end(), Complex{});
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t j = 0; j < len; ++j) prod[i + j] += fc[i] * gc[j];
        Complex lf = 0.0, lg = 0.0, lfg = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            lf += w[i] * fc[i];
            lg += w[i] * gc[i];
        }
        for (std::size_t n = 0; n < prod.size(); ++n) lfg += w[n] * prod[n];
        const double defect = std::abs(lfg - lf * lg);
        out.max_defect = std::max(out.max_defect, defect);
        if (defect <= opt.tol) continue;

        const auto f = CoeffFunction::from_dense(fc);
        const auto g = CoeffFunction::from_dense(gc);
        const double verified = multiplicativity_defect_direct(L, f, g);
        if (verified <= opt.tol) continue;
        out.kind = FindingKind::multiplicativity_violation;
        out.witness_f = f;
        out.witness_g = g;
        out.defect = verified;
        return out;
    }
    out.kind = FindingKind::no_violation_found;
    return out;
}

std::vector<CoeffFunction> default_test_functions(std::size_t vars) {
    std::vector<CoeffFunction> out;
    out.push_back(CoeffFunction::constant(vars, 1.0));
    for (std::size_t k = 0; k < vars; ++k) out.push_back(CoeffFunction::variable(vars, k));
    if (vars == 1) {
        out.push_back(CoeffFunction::monomial(MultiIndex{2}));
    } else {
        out.push_back(CoeffFunction::monomial(MultiIndex{2, 0}));
        out.push_back(CoeffFunction::monomial(MultiIndex{1, 1}));
        out.push_back(CoeffFunction::monomial(MultiIndex{0, 2}));
    }
    return out;
}

std::optional<Point> point_eval_witness(const CoeffFunctional& L, const std::vector<CoeffFunction>& tests,
                                        const std::vector<Point>& grid, double tol) {
    if (grid.empty()) throw GridEmptyError("point_eval_witness: grid is empty");
    const std::size_t vars = L.vars;
    for (const auto& phi : tests)
        if (phi.vars() != vars) throw InvalidArgument("point_eval_witness: test function variable count mismatch");

    const auto contains = [&](const CoeffFunction& target) {
        return std::any_of(tests.begin(), tests.end(), [&](const CoeffFunction& phi) { return phi == target; });
    };
    if (!contains(CoeffFunction::constant(vars, 1.0)))
        throw InvalidArgument("point_eval_witness: test functions must include the constant 1");
    for (std::size_t k = 0; k < vars; ++k) {
        if (!contains(CoeffFunction::variable(vars, k)))
            throw InvalidArgument("point_eval_witness: test functions must include z_" + std::to_string(k + 1));
    }
    const bool has_quadratic = std::any_of(tests.begin(), tests.end(), [](const CoeffFunction& phi) {
        return phi.terms().size() == 1 && phi.terms().begin()->first.total_degree() == 2;
    });
    if (!has_quadratic) throw InvalidArgument("point_eval_witness: test functions must include a degree-2 monomial");

    std::vector<Complex> values;
    values.reserve(tests.size());
    for (const auto& phi : tests) values.push_back(apply_functional(L, phi));

    for (const auto& x : grid) {
        if (x.dim() != vars) throw InvalidArgument("point_eval_witness: grid point dimension mismatch");
        bool match = true;
        for (std::size_t i = 0; i < tests.size() && match; ++i)
            match = std::abs(values[i] - tests[i].evaluate(x)) <= tol;
        if (match) return x;
    }
    return std::nullopt;
}

}  // namespace picklab
