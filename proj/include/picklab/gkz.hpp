#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "picklab/coeff.hpp"
#include "picklab/kernel.hpp"

namespace picklab {

/// Roots with 1 - |rho| <= this count as lying on the unit circle.
inline constexpr double kRootTol = 1e-9;

/// Roots of a one-variable polynomial via companion-matrix eigenvalues.
/// Clusters that match the perturbation pattern of a multiple root are
/// replaced by their centroid. Throws ZeroPolynomialError for p == 0.
std::vector<Complex> polynomial_roots(const CoeffFunction& p);

/// A polynomial is cyclic in H^2 iff it is outer, i.e. has no zeros in the
/// open unit disk. Roots within `tol` of the circle count as boundary zeros.
bool hardy_cyclic(const CoeffFunction& p, double tol = kRootTol);

enum class FindingKind { cyclic_annihilated, multiplicativity_violation, no_violation_found };
std::string to_string(FindingKind k);

struct Violation {
    CoeffFunction f;
    CoeffFunction g;
    double defect = 0.0;
};

struct Finding {
    FindingKind kind = FindingKind::no_violation_found;
    /// cyclic_annihilated: the annihilated cyclic f. violation: the pair.
    std::optional<CoeffFunction> witness_f;
    std::optional<CoeffFunction> witness_g;
    /// violation: its defect. cyclic_annihilated: the defect of the
    /// accompanying violation, when one was found.
    std::optional<double> defect;
    /// cyclic_annihilated only: |L(f)|.
    std::optional<double> annihilation;
    /// cyclic_annihilated only: a re-verified violation among powers of f.
    std::optional<Violation> accompanying;
    /// cyclic_annihilated with L(1) = 1 but no violation among powers of f
    /// within the degree budget.
    bool accompanying_missing = false;

    Complex lambda_one{};
    bool unital = false;
    double max_defect = 0.0;
    std::size_t candidates_checked = 0;
    std::size_t trials_run = 0;

    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t max_degree = 0;
};

struct SearchOptions {
    std::size_t max_degree = 12;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    double root_tol = kRootTol;
    /// Cap on the number of factor products tried in the deterministic phase.
    std::size_t max_candidates = 20000;
};

/// Factors rho of the deterministic candidates (1 - rho z), in trial order.
std::vector<Complex> candidate_factor_grid();

/// |L(fg) - L(f)L(g)| evaluated as sum_{a,b} L_{a+b} f_a g_b without forming
/// the product polynomial. Used to re-verify findings.
double multiplicativity_defect_direct(const CoeffFunctional& L, const CoeffFunction& f, const CoeffFunction& g);

/// Looks for a cyclic polynomial annihilated by L, then for a random pair
/// (f, g) with a multiplicativity defect above tol. Deterministic in
/// (L, options). A no_violation_found result is not a proof of
/// multiplicativity. Throws FunctionalSupportError if L is declared only up
/// to a degree below 2 * max_degree.
Finding gkz_dichotomy_search(const CoeffFunctional& L, const SearchOptions& options = {});

/// 1, every coordinate z_k and every degree-2 monomial in `vars` variables.
std::vector<CoeffFunction> default_test_functions(std::size_t vars);

/// First grid point x with |L(phi) - phi(x)| <= tol for every test function.
/// Throws GridEmptyError for an empty grid and InvalidArgument when the test
/// functions miss 1, a coordinate function or a degree-2 monomial.
std::optional<Point> point_eval_witness(const CoeffFunctional& L, const std::vector<CoeffFunction>& test_functions,
                                        const std::vector<Point>& grid, double tol = 1e-9);

}  // namespace picklab
