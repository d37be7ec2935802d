#include "picklab/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "picklab/errors.hpp"

namespace picklab {

namespace {

// k! as doubles, exact up to 22!, correctly rounded products afterwards.
const std::array<double, 171>& factorial_table() {
    static const std::array<double, 171> table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] * static_cast<double>(k);
        return t;
    }();
    return table;
}

std::size_t isqrt(std::size_t n) {
    auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (k * k > n) --k;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

std::string format_point(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (i) os << ", ";
        os << p[i].real() << (p[i].imag() < 0 ? "-" : "+") << std::abs(p[i].imag()) << "i";
    }
    os << ")";
    return os.str();
}

// Number of consecutive small terms required before the series is declared
// converged. A single small term is not enough for weight sequences with jumps.
constexpr std::size_t kStopWindow = 8;

Complex diagonal_series(const DiagonalWeights& a, const SeriesPolicy& policy, Complex u) {
    const auto len = a.length();
    Complex sum = 0.0;
    Complex power = 1.0;
    std::size_t small_run = 0;
    for (std::size_t n = 0; n < policy.max_terms; ++n) {
        if (len && n >= *len) return sum;
        const Complex term = a(n) * power;
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) break;
        sum += term;
        if (std::abs(term) < policy.term_tol * std::abs(sum)) {
            if (++small_run >= kStopWindow) return sum;
        } else {
            small_run = 0;
        }
        power *= u;
    }
    std::ostringstream os;
    os << "diagonal kernel series did not reach term_tol " << policy.term_tol << " within "
       << policy.max_terms << " terms at z*conj(w) = " << u;
    throw ConvergenceError(os.str());
}

}  // namespace

double distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

double euclidean_norm(const Point& p) {
    double s = 0.0;
    for (const auto& c : p.coords) s += std::norm(c);
    return std::sqrt(s);
}

Complex inner(const Point& x, const Point& y) {
    if (x.dim() != y.dim()) throw InvalidArgument("inner: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

// ---------------------------------------------------------------- PointSet

PointSet::PointSet(std::size_t dim, std::vector<Point> points, std::optional<std::size_t> base_index)
    : dim_(dim), points_(std::move(points)), base_index_(base_index) {
    if (dim_ == 0) throw InvalidArgument("PointSet: dimension must be positive");
    if (points_.empty()) throw InvalidArgument("PointSet: at least one point is required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].dim() != dim_) {
            throw InvalidArgument("PointSet: point " + std::to_string(i) + " has dimension " +
                                  std::to_string(points_[i].dim()) + ", expected " +
                                  std::to_string(dim_));
        }
        for (const auto& c : points_[i].coords) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw InvalidArgument("PointSet: point " + std::to_string(i) + " is not finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (distance(points_[i], points_[j]) < kPointTol) {
                throw InvalidArgument("PointSet: points " + std::to_string(j) + " and " +
                                      std::to_string(i) + " coincide " +
                                      format_point(points_[i]));
            }
        }
    }
    if (base_index_ && *base_index_ >= points_.size())
        throw InvalidArgument("PointSet: base_index out of range");
}

PointSet PointSet::scalar(const std::vector<Complex>& values, std::optional<std::size_t> base_index) {
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (const auto& v : values) pts.push_back(Point{v});
    return PointSet(1, std::move(pts), base_index);
}

std::optional<std::size_t> PointSet::find(const Point& p) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (p.dim() == dim_ && distance(points_[i], p) < kPointTol) return i;
    return std::nullopt;
}

PointSet PointSet::merged_with(const std::vector<Point>& extra) const {
    auto pts = points_;
    for (const auto& p : extra) {
        const bool present = std::any_of(pts.begin(), pts.end(), [&](const Point& q) {
            return q.dim() == p.dim() && distance(p, q) < kPointTol;
        });
        if (!present) pts.push_back(p);
    }
    return PointSet(dim_, std::move(pts), base_index_);
}

PointSet PointSet::subset(const std::vector<std::size_t>& indices) const {
    std::vector<Point> pts;
    pts.reserve(indices.size());
    for (auto i : indices) pts.push_back(points_.at(i));
    return PointSet(dim_, std::move(pts));
}

// --------------------------------------------------------- DiagonalWeights

DiagonalWeights DiagonalWeights::explicit_list(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("diagonal weights: empty list");
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!(values[n] > 0.0) || !std::isfinite(values[n]))
            throw InvalidArgument("diagonal weights: a_" + std::to_string(n) + " must be positive");
    }
    return DiagonalWeights(Explicit{std::move(values)});
}

DiagonalWeights DiagonalWeights::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("diagonal weights: constant must be positive");
    return DiagonalWeights(Constant{c});
}

DiagonalWeights DiagonalWeights::gkz() { return DiagonalWeights(Gkz{}); }

double DiagonalWeights::operator()(std::size_t n) const {
    return std::visit(
        [n](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Explicit>) {
                return n < r.values.size() ? r.values[n] : 0.0;
            } else if constexpr (std::is_same_v<T, Constant>) {
                return r.value;
            } else {
                const auto k = isqrt(n);
                const auto& table = factorial_table();
                return k < table.size() ? table[k] : HUGE_VAL;
            }
        },
        rule_);
}

std::optional<std::size_t> DiagonalWeights::length() const {
    if (const auto* e = std::get_if<Explicit>(&rule_)) return e->values.size();
    return std::nullopt;
}

std::string DiagonalWeights::describe() const {
    return std::visit(
        [](const auto& r) -> std::string {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Explicit>) {
                std::ostringstream os;
                os << "list[";
                for (std::size_t i = 0; i < r.values.size(); ++i) os << (i ? "," : "") << r.values[i];
                os << "]";
                return os.str();
            } else if constexpr (std::is_same_v<T, Constant>) {
                std::ostringstream os;
                os << "const:" << r.value;
                return os.str();
            } else {
                return "gkz";
            }
        },
        rule_);
}

// -------------------------------------------------------------- KernelSpec

KernelSpec KernelSpec::szego() { return KernelSpec(KernelFamily::szego, 1); }
KernelSpec KernelSpec::bergman() { return KernelSpec(KernelFamily::bergman, 1); }

KernelSpec KernelSpec::drury_arveson(std::size_t d) {
    if (d == 0) throw InvalidArgument("drury_arveson: dimension must be positive");
    return KernelSpec(KernelFamily::drury_arveson, d);
}

KernelSpec KernelSpec::diagonal(DiagonalWeights weights, SeriesPolicy policy) {
    if (policy.max_terms == 0 || !(policy.term_tol > 0.0))
        throw InvalidArgument("diagonal: invalid series policy");
    KernelSpec s(KernelFamily::diagonal, 1);
    s.weights_ = std::move(weights);
    s.policy_ = policy;
    return s;
}

KernelSpec KernelSpec::segal_bargmann_hardy() { return KernelSpec(KernelFamily::segal_bargmann_hardy, 2); }

std::string KernelSpec::name() const {
    switch (family_) {
        case KernelFamily::szego: return "szego";
        case KernelFamily::bergman: return "bergman";
        case KernelFamily::drury_arveson: return "drury_arveson(" + std::to_string(dim_) + ")";
        case KernelFamily::diagonal: return "diagonal(" + weights_->describe() + ")";
        case KernelFamily::segal_bargmann_hardy: return "segal_bargmann_hardy";
    }
    return "unknown";
}

void KernelSpec::check_point(const Point& p) const {
    if (p.dim() != dim_) {
        throw DomainError(name() + ": point " + format_point(p) + " has dimension " +
                          std::to_string(p.dim()) + ", expected " + std::to_string(dim_));
    }
    for (const auto& c : p.coords) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DomainError(name() + ": point " + format_point(p) + " is not finite");
    }
    double radius = 0.0;
    switch (family_) {
        case KernelFamily::szego:
        case KernelFamily::bergman:
        case KernelFamily::diagonal: radius = std::abs(p[0]); break;
        case KernelFamily::drury_arveson: radius = euclidean_norm(p); break;
        case KernelFamily::segal_bargmann_hardy: radius = std::abs(p[1]); break;
    }
    if (1.0 - radius < kBoundaryMargin)
        throw DomainError(name() + ": point " + format_point(p) + " is outside the admissible domain");
}

void KernelSpec::check_points(const PointSet& pts) const {
    for (const auto& p : pts.points()) check_point(p);
}

// --------------------------------------------------------- HermitianMatrix

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("HermitianMatrix: matrix is not square");
    m_ = (m + m.adjoint()) * 0.5;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = m_(i, i).real();
}

HermitianMatrix HermitianMatrix::principal(const std::vector<std::size_t>& indices) const {
    const auto k = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m_(indices.at(i), indices.at(j));
    return HermitianMatrix(sub);
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& m) {
    if (m.size() == 0) return Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    return es.eigenvalues();
}

PsdCheck check_psd(const HermitianMatrix& m, double tol) {
    const auto ev = eigenvalues(m);
    if (ev.size() == 0) return {0.0, 0.0, true, false};
    const double lo = ev(0);
    const double rho = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const double band = tol * std::max(1.0, rho);
    return {lo, rho, lo >= -band, std::abs(lo) <= band};
}

double min_eigenvalue(const HermitianMatrix& m) {
    const auto ev = eigenvalues(m);
    return ev.size() ? ev(0) : 0.0;
}

double spectral_radius(const HermitianMatrix& m) { return check_psd(m).spectral_radius; }

bool is_psd(const HermitianMatrix& m, double tol) { return check_psd(m, tol).psd; }

// ------------------------------------------------------------- evaluation

Complex eval_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
    spec.check_point(x);
    spec.check_point(y);
    switch (spec.family()) {
        case KernelFamily::szego: return 1.0 / (1.0 - x[0] * std::conj(y[0]));
        case KernelFamily::bergman: {
            const Complex d = 1.0 - x[0] * std::conj(y[0]);
            return 1.0 / (d * d);
        }
        case KernelFamily::drury_arveson: return 1.0 / (1.0 - inner(x, y));
        case KernelFamily::diagonal:
            return diagonal_series(*spec.weights(), spec.policy(), x[0] * std::conj(y[0]));
        case KernelFamily::segal_bargmann_hardy:
            return std::exp(x[0] * std::conj(y[0])) / (1.0 - x[1] * std::conj(y[1]));
    }
    throw InvalidArgument("eval_kernel: unknown family");
}

HermitianMatrix gram(const KernelSpec& spec, const PointSet& pts) {
    spec.check_points(pts);
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXcd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            k(i, j) = eval_kernel(spec, pts[i], pts[j]);
            k(j, i) = std::conj(k(i, j));
        }
    }
    return HermitianMatrix(k);
}

}  // namespace picklab
