#include "picklab/coeff.hpp"

#include <cmath>
#include <string>

#include "picklab/errors.hpp"

namespace picklab {

namespace {

double factorial_double(unsigned j) {
    double f = 1.0;
    for (unsigned i = 2; i <= j; ++i) f *= i;
    return f;
}

BigInt factorial(std::size_t k) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

// -------------------------------------------------------------- MultiIndex

std::size_t MultiIndex::total_degree() const noexcept {
    std::size_t s = 0;
    for (auto e : exps_) s += e;
    return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    if (o.vars() != vars()) throw InvalidArgument("MultiIndex: variable count mismatch");
    std::vector<unsigned> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
    return MultiIndex(std::move(e));
}

// ----------------------------------------------------------- CoeffFunction

CoeffFunction::CoeffFunction(std::size_t vars) : vars_(vars) {
    if (vars_ != 1 && vars_ != 2) throw InvalidArgument("CoeffFunction: only 1 or 2 variables are supported");
}

CoeffFunction CoeffFunction::constant(std::size_t vars, Complex c) {
    CoeffFunction f(vars);
    f.set(MultiIndex(std::vector<unsigned>(vars, 0)), c);
    return f;
}

CoeffFunction CoeffFunction::monomial(const MultiIndex& idx, Complex c) {
    CoeffFunction f(idx.vars());
    f.set(idx, c);
    return f;
}

CoeffFunction CoeffFunction::variable(std::size_t vars, std::size_t k) {
    if (k >= vars) throw InvalidArgument("CoeffFunction::variable: index out of range");
    std::vector<unsigned> e(vars, 0);
    e[k] = 1;
    return monomial(MultiIndex(std::move(e)));
}

CoeffFunction CoeffFunction::from_dense(const std::vector<Complex>& coeffs) {
    CoeffFunction f(1);
    for (std::size_t n = 0; n < coeffs.size(); ++n) f.set(MultiIndex{static_cast<unsigned>(n)}, coeffs[n]);
    return f;
}

std::size_t CoeffFunction::degree() const noexcept {
    std::size_t d = 0;
    for (const auto& [idx, c] : terms_) d = std::max(d, idx.total_degree());
    return d;
}

void CoeffFunction::check_index(const MultiIndex& idx) const {
    if (idx.vars() != vars_) {
        throw InvalidArgument("CoeffFunction: index with " + std::to_string(idx.vars()) +
                              " variables used on a " + std::to_string(vars_) + "-variable function");
    }
}

Complex CoeffFunction::coeff(const MultiIndex& idx) const {
    check_index(idx);
    const auto it = terms_.find(idx);
    return it == terms_.end() ? Complex{} : it->second;
}

void CoeffFunction::set(const MultiIndex& idx, Complex c) {
    check_index(idx);
    if (c == Complex{}) {
        terms_.erase(idx);
    } else {
        terms_[idx] = c;
    }
}

void CoeffFunction::add_to(const MultiIndex& idx, Complex c) { set(idx, coeff(idx) + c); }

std::vector<Complex> CoeffFunction::dense() const {
    if (vars_ != 1) throw InvalidArgument("CoeffFunction::dense: one-variable function required");
    std::vector<Complex> out(is_zero() ? 0 : degree() + 1);
    for (const auto& [idx, c] : terms_) out[idx[0]] = c;
    return out;
}

Complex CoeffFunction::evaluate(const Point& x) const {
    if (x.dim() != vars_) throw InvalidArgument("CoeffFunction::evaluate: dimension mismatch");
    Complex s = 0.0;
    for (const auto& [idx, c] : terms_) {
        Complex m = c;
        for (std::size_t v = 0; v < vars_; ++v) m *= std::pow(x[v], static_cast<int>(idx[v]));
        s += m;
    }
    return s;
}

double CoeffFunction::norm1() const {
    double s = 0.0;
    for (const auto& [idx, c] : terms_) s += std::abs(c);
    return s;
}

CoeffFunction CoeffFunction::operator+(const CoeffFunction& o) const {
    if (o.vars_ != vars_) throw InvalidArgument("CoeffFunction: variable count mismatch");
    CoeffFunction r(*this);
    for (const auto& [idx, c] : o.terms_) r.add_to(idx, c);
    return r;
}

CoeffFunction CoeffFunction::operator-(const CoeffFunction& o) const { return *this + o * Complex(-1.0); }

CoeffFunction CoeffFunction::operator*(Complex s) const {
    CoeffFunction r(vars_);
    for (const auto& [idx, c] : terms_) r.set(idx, c * s);
    return r;
}

CoeffFunction multiply(const CoeffFunction& f, const CoeffFunction& g) {
    if (f.vars() != g.vars()) throw InvalidArgument("multiply: variable count mismatch");
    CoeffFunction r(f.vars());
    for (const auto& [a, ca] : f.terms())
        for (const auto& [b, cb] : g.terms()) r.add_to(a + b, ca * cb);
    return r;
}

CoeffFunction power(const CoeffFunction& f, unsigned m) {
    CoeffFunction r = CoeffFunction::constant(f.vars(), 1.0);
    for (unsigned i = 0; i < m; ++i) r = multiply(r, f);
    return r;
}

// ------------------------------------------------------------ SpaceWeights

SpaceWeights SpaceWeights::hardy() { return SpaceWeights(Kind::hardy); }
SpaceWeights SpaceWeights::sb_hardy() { return SpaceWeights(Kind::sb_hardy); }

SpaceWeights SpaceWeights::diagonal(DiagonalWeights a) {
    SpaceWeights w(Kind::diagonal);
    w.a_ = std::move(a);
    return w;
}

double SpaceWeights::weight(const MultiIndex& idx) const {
    switch (kind_) {
        case Kind::hardy: return 1.0;
        case Kind::sb_hardy:
            if (idx.vars() != 2) throw InvalidArgument("sb_hardy weights need two-variable indices");
            return factorial_double(idx[0]);
        case Kind::diagonal: {
            if (idx.vars() != 1) throw InvalidArgument("diagonal weights need one-variable indices");
            const double a = (*a_)(idx[0]);
            if (!(a > 0.0)) throw InvalidArgument("diagonal weights: a_" + std::to_string(idx[0]) + " undefined");
            return 1.0 / a;
        }
    }
    return 1.0;
}

std::string SpaceWeights::name() const {
    switch (kind_) {
        case Kind::hardy: return "hardy";
        case Kind::sb_hardy: return "sb_hardy";
        case Kind::diagonal: return "diagonal(" + a_->describe() + ")";
    }
    return "unknown";
}

double space_norm(const CoeffFunction& f, const SpaceWeights& w) {
    double s = 0.0;
    for (const auto& [idx, c] : f.terms()) s += w.weight(idx) * std::norm(c);
    return std::sqrt(s);
}

// ----------------------------------------------------------- functionals

CoeffFunctional CoeffFunctional::point_evaluation(const Point& x, std::size_t degree) {
    if (x.dim() != 1 && x.dim() != 2) throw InvalidArgument("point_evaluation: 1 or 2 variables supported");
    CoeffFunctional L;
    L.vars = x.dim();
    L.degree = degree;
    for (unsigned d = 0; d <= degree; ++d) {
        if (L.vars == 1) {
            const Complex w = std::pow(x[0], static_cast<int>(d));
            if (w != Complex{}) L.weights[MultiIndex{d}] = w;
        } else {
            for (unsigned j = 0; j <= d; ++j) {
                const Complex w = std::pow(x[0], static_cast<int>(j)) * std::pow(x[1], static_cast<int>(d - j));
                if (w != Complex{}) L.weights[MultiIndex{j, d - j}] = w;
            }
        }
    }
    return L;
}

CoeffFunctional CoeffFunctional::unit_sum(std::size_t vars, const std::vector<MultiIndex>& indices) {
    CoeffFunctional L;
    L.vars = vars;
    for (const auto& idx : indices) {
        if (idx.vars() != vars) throw InvalidArgument("unit_sum: variable count mismatch");
        L.weights[idx] += 1.0;
    }
    return L;
}

Complex apply_functional(const CoeffFunctional& L, const CoeffFunction& f) {
    if (L.vars != f.vars()) throw InvalidArgument("apply_functional: variable count mismatch");
    if (L.degree && !f.is_zero() && f.degree() > *L.degree) {
        throw FunctionalSupportError("functional defined up to degree " + std::to_string(*L.degree) +
                                     " applied to a degree " + std::to_string(f.degree()) + " function");
    }
    Complex s = 0.0;
    for (const auto& [idx, c] : f.terms()) {
        const auto it = L.weights.find(idx);
        if (it != L.weights.end()) s += it->second * c;
    }
    return s;
}

double multiplicativity_defect(const CoeffFunctional& L, const CoeffFunction& f, const CoeffFunction& g) {
    if (f.vars() != g.vars()) throw InvalidArgument("multiplicativity_defect: variable count mismatch");
    if (L.degree && f.degree() + g.degree() > *L.degree) {
        throw FunctionalSupportError("functional defined up to degree " + std::to_string(*L.degree) +
                                     ", product needs degree " + std::to_string(f.degree() + g.degree()));
    }
    return std::abs(apply_functional(L, multiply(f, g)) - apply_functional(L, f) * apply_functional(L, g));
}

CoeffFunctional sb_hardy_functional() { return CoeffFunctional::unit_sum(2, {MultiIndex{0, 0}, MultiIndex{0, 1}}); }

double isometry_check_mz2(const CoeffFunction& f) {
    if (f.vars() != 2) throw InvalidArgument("isometry_check_mz2: two-variable function required");
    const auto w = SpaceWeights::sb_hardy();
    return std::abs(space_norm(multiply(CoeffFunction::variable(2, 1), f), w) - space_norm(f, w));
}

// -------------------------------------------------------- weight sequence

std::size_t gkz_block(std::size_t n) {
    auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (k * k > n) --k;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

BigInt gkz_weight(std::size_t n) { return factorial(gkz_block(n)); }

SequenceReport check_sequence_properties(std::size_t horizon) {
    if (horizon < 4) throw InvalidArgument("check_sequence_properties: horizon must be >= 4");
    SequenceReport r;
    r.horizon = horizon;
    r.min_ratio = 1;

    // a_n is k!, advanced whenever n reaches the next square.
    std::size_t k = 0;
    BigInt a = 1;
    BigInt a_pow_k = 1;  // (k!)^k
    BigInt k_pow_n = 1;  // k^n
    bool have_min = false;
    for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0 && (k + 1) * (k + 1) == n) {
            ++k;
            a *= k;
            a_pow_k = boost::multiprecision::pow(a, static_cast<unsigned>(k));
            k_pow_n = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(n));
        } else if (n > 0) {
            k_pow_n *= k;
        }
        if (n >= 1 && !(a >= 1 && a_pow_k <= k_pow_n)) r.root_bracket_ok = false;

        if (n < horizon) {
            const BigInt next = gkz_block(n + 1) == k ? a : a * (k + 1);
            if (a > next) r.ratios_le_one = false;
            const Rational ratio(a, next);
            if (!have_min || ratio < r.min_ratio) {
                r.min_ratio = ratio;
                r.min_ratio_at = n;
                have_min = true;
            }
        }
    }
    return r;
}

// ----------------------------------------------------------- M_z witness

MzWitness mz_unbounded_witness(std::size_t blocks) {
    if (blocks < 1) throw InvalidArgument("mz_unbounded_witness: at least one block is required");
    MzWitness w;
    w.blocks = blocks;
    CoeffFunction g(1);
    bool representable = true;
    for (std::size_t k = 1; k <= blocks; ++k) {
        const std::size_t n = (k + 1) * (k + 1);
        const BigInt a_n = gkz_weight(n);
        const BigInt a_prev = gkz_weight(n - 1);
        const Rational c_sq(a_n, BigInt(k * k));
        // ||c z^n||^2 = |c|^2 / a_n and ||c z^{n-1}||^2 = |c|^2 / a_{n-1}
        w.norm_sq_g += static_cast<double>(Rational(c_sq / Rational(a_n)));
        w.norm_sq_g_over_z += static_cast<double>(Rational(c_sq / Rational(a_prev)));
        if (representable) {
            const double c = std::sqrt(static_cast<double>(a_n)) / static_cast<double>(k);
            if (std::isfinite(c)) {
                g.set(MultiIndex{static_cast<unsigned>(n)}, c);
            } else {
                representable = false;
            }
        }
    }
    if (representable) w.terms = std::move(g);
    return w;
}

std::vector<MzWitness> mz_witness_series(std::size_t max_blocks) {
    std::vector<MzWitness> out;
    out.reserve(max_blocks);
    double g = 0.0;
    double g_over_z = 0.0;
    BigInt a_prev = 1;  // a_{(k+1)^2 - 1} = k!
    BigInt a_n = 2;     // a_{(k+1)^2} = (k+1)!
    for (std::size_t k = 1; k <= max_blocks; ++k) {
        if (k > 1) {
            a_prev = a_n;
            a_n *= (k + 1);
        }
        const Rational c_sq(a_n, BigInt(k * k));
        const Rational term_g = c_sq / Rational(a_n);
        const Rational term_gz = c_sq / Rational(a_prev);
        g += static_cast<double>(term_g);
        g_over_z += static_cast<double>(term_gz);
        out.push_back(MzWitness{k, g, g_over_z, std::nullopt});
    }
    return out;
}

}  // namespace picklab
