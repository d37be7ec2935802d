#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "picklab/kernel.hpp"

namespace picklab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exponent vector of a monomial in 1 or 2 variables.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<unsigned> e) : exps_(e) {}
    explicit MultiIndex(std::vector<unsigned> e) : exps_(std::move(e)) {}

    std::size_t vars() const noexcept { return exps_.size(); }
    unsigned operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<unsigned>& exponents() const noexcept { return exps_; }
    std::size_t total_degree() const noexcept;

    MultiIndex operator+(const MultiIndex& o) const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<unsigned> exps_;
};

/// Finitely supported power series sum_alpha c_alpha z^alpha. Zero
/// coefficients are never stored.
class CoeffFunction {
public:
    using Terms = std::map<MultiIndex, Complex>;

    explicit CoeffFunction(std::size_t vars = 1);

    static CoeffFunction constant(std::size_t vars, Complex c);
    static CoeffFunction monomial(const MultiIndex& idx, Complex c = 1.0);
    /// z_k in `vars` variables.
    static CoeffFunction variable(std::size_t vars, std::size_t k);
    /// One variable, coefficients c_0, c_1, ... in ascending degree.
    static CoeffFunction from_dense(const std::vector<Complex>& coeffs);

    std::size_t vars() const noexcept { return vars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Maximum total degree of a stored term (0 for the zero function).
    std::size_t degree() const noexcept;

    Complex coeff(const MultiIndex& idx) const;
    void set(const MultiIndex& idx, Complex c);
    void add_to(const MultiIndex& idx, Complex c);

    /// Ascending coefficients of a one-variable function.
    std::vector<Complex> dense() const;
    Complex evaluate(const Point& x) const;
    /// sum |c_alpha|
    double norm1() const;

    CoeffFunction operator+(const CoeffFunction& o) const;
    CoeffFunction operator-(const CoeffFunction& o) const;
    CoeffFunction operator*(Complex s) const;

    bool operator==(const CoeffFunction&) const = default;

private:
    void check_index(const MultiIndex& idx) const;

    std::size_t vars_;
    Terms terms_;
};

/// Exact polynomial product (coefficient convolution).
CoeffFunction multiply(const CoeffFunction& f, const CoeffFunction& g);
inline CoeffFunction operator*(const CoeffFunction& f, const CoeffFunction& g) { return multiply(f, g); }
CoeffFunction power(const CoeffFunction& f, unsigned m);

/// Monomial weights w_alpha of ||f||^2 = sum w_alpha |c_alpha|^2.
class SpaceWeights {
public:
    /// w = 1
    static SpaceWeights hardy();
    /// w_(j,k) = j!
    static SpaceWeights sb_hardy();
    /// w_n = 1 / a_n
    static SpaceWeights diagonal(DiagonalWeights a);

    double weight(const MultiIndex& idx) const;
    std::string name() const;

private:
    enum class Kind { hardy, sb_hardy, diagonal };
    explicit SpaceWeights(Kind k) : kind_(k) {}

    Kind kind_;
    std::optional<DiagonalWeights> a_;
};

double space_norm(const CoeffFunction& f, const SpaceWeights& w);

/// Linear functional L(f) = sum_alpha weights_alpha c_alpha.
///
/// `degree` is the truncation contract: when set, the functional is only
/// known on monomials of total degree <= degree and applying it to anything
/// of higher degree throws FunctionalSupportError. When unset the functional
/// is exactly zero on every monomial outside its weights.
struct CoeffFunctional {
    std::size_t vars = 1;
    CoeffFunction::Terms weights;
    std::optional<std::size_t> degree;

    /// Weights x^alpha for all |alpha| <= degree, so L(p) = p(x) on that range.
    static CoeffFunctional point_evaluation(const Point& x, std::size_t degree);
    /// Sum of unit weights e_alpha over the given indices.
    static CoeffFunctional unit_sum(std::size_t vars, const std::vector<MultiIndex>& indices);

    bool operator==(const CoeffFunctional&) const = default;
};

Complex apply_functional(const CoeffFunctional& L, const CoeffFunction& f);
/// |L(fg) - L(f) L(g)|
double multiplicativity_defect(const CoeffFunctional& L, const CoeffFunction& f, const CoeffFunction& g);

/// The functional a_00 + a_01 on the two-variable Segal–Bargmann ⊗ Hardy space.
CoeffFunctional sb_hardy_functional();
/// | ||z2 f|| - ||f|| | in the sb_hardy norm.
double isometry_check_mz2(const CoeffFunction& f);

/// Unique k with k^2 <= n < (k+1)^2.
std::size_t gkz_block(std::size_t n);
/// a_n = k! for k^2 <= n < (k+1)^2, exact.
BigInt gkz_weight(std::size_t n);

struct SequenceReport {
    std::size_t horizon = 0;
    bool ratios_le_one = true;
    Rational min_ratio;
    std::size_t min_ratio_at = 0;
    /// 1 <= a_n^{1/n} <= k^{1/k} for 1 <= n <= horizon (checked exactly as
    /// (k!)^k <= k^n).
    bool root_bracket_ok = true;
};

/// Scans a_n / a_{n+1} for 0 <= n < horizon and the root bracket for
/// 1 <= n <= horizon. Requires horizon >= 4.
SequenceReport check_sequence_properties(std::size_t horizon);

/// Norms of g_K = sum_{k=1..K} c_k z^{(k+1)^2} with |c_k|^2 = a_{(k+1)^2} / k^2.
struct MzWitness {
    std::size_t blocks = 0;
    double norm_sq_g = 0.0;
    double norm_sq_g_over_z = 0.0;
    /// The coefficients of g_K, present while they are representable as doubles.
    std::optional<CoeffFunction> terms;
};

MzWitness mz_unbounded_witness(std::size_t blocks);
/// Entry K-1 holds the witness norms for K blocks (terms omitted).
std::vector<MzWitness> mz_witness_series(std::size_t max_blocks);

}  // namespace picklab
