#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace picklab {

using Complex = std::complex<double>;

/// Two points closer than this (Euclidean norm) are treated as the same point.
inline constexpr double kPointTol = 1e-12;
/// Disk/ball families reject points with 1 - |z| below this margin.
inline constexpr double kBoundaryMargin = 1e-9;
/// Default PSD tolerance, relative to max(1, spectral radius).
inline constexpr double kDefaultPsdTol = 1e-9;

struct Point {
    std::vector<Complex> coords;

    Point() = default;
    Point(std::initializer_list<Complex> c) : coords(c) {}
    explicit Point(std::vector<Complex> c) : coords(std::move(c)) {}

    std::size_t dim() const noexcept { return coords.size(); }
    const Complex& operator[](std::size_t i) const { return coords[i]; }
    Complex& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);
double euclidean_norm(const Point& p);
/// <x, y> = sum_k x_k conj(y_k)
Complex inner(const Point& x, const Point& y);

/// Finite, nonempty list of pairwise-distinct points of a common dimension,
/// with an optional distinguished base point.
class PointSet {
public:
    PointSet(std::size_t dim, std::vector<Point> points,
             std::optional<std::size_t> base_index = std::nullopt);

    /// Convenience constructor for one-variable sets.
    static PointSet scalar(const std::vector<Complex>& values,
                           std::optional<std::size_t> base_index = std::nullopt);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const noexcept { return points_; }
    std::optional<std::size_t> base_index() const noexcept { return base_index_; }

    /// Index of a point within kPointTol of p, if any.
    std::optional<std::size_t> find(const Point& p) const;

    /// Returns this set plus every point of `extra` not already present.
    PointSet merged_with(const std::vector<Point>& extra) const;
    /// Principal subset keeping the given indices (in that order).
    PointSet subset(const std::vector<std::size_t>& indices) const;

private:
    std::size_t dim_;
    std::vector<Point> points_;
    std::optional<std::size_t> base_index_;
};

/// Coefficient sequence a_n of a diagonal kernel sum_n a_n (z conj(w))^n.
class DiagonalWeights {
public:
    /// a_n for n < values.size(), zero afterwards (polynomial kernel).
    static DiagonalWeights explicit_list(std::vector<double> values);
    /// a_n = c for all n.
    static DiagonalWeights constant(double c);
    /// a_n = k! for k^2 <= n < (k+1)^2.
    static DiagonalWeights gkz();

    double operator()(std::size_t n) const;
    /// Number of nonzero coefficients, or nullopt for an infinite sequence.
    std::optional<std::size_t> length() const;
    std::string describe() const;

private:
    struct Explicit { std::vector<double> values; };
    struct Constant { double value; };
    struct Gkz {};
    using Rule = std::variant<Explicit, Constant, Gkz>;

    explicit DiagonalWeights(Rule r) : rule_(std::move(r)) {}
    Rule rule_;
};

enum class KernelFamily { szego, bergman, drury_arveson, diagonal, segal_bargmann_hardy };

struct SeriesPolicy {
    std::size_t max_terms = 100000;
    double term_tol = 1e-15;
};

class KernelSpec {
public:
    static KernelSpec szego();
    static KernelSpec bergman();
    static KernelSpec drury_arveson(std::size_t d);
    static KernelSpec diagonal(DiagonalWeights weights, SeriesPolicy policy = {});
    static KernelSpec segal_bargmann_hardy();

    KernelFamily family() const noexcept { return family_; }
    /// Ambient dimension of the domain.
    std::size_t dim() const noexcept { return dim_; }
    const std::optional<DiagonalWeights>& weights() const noexcept { return weights_; }
    const SeriesPolicy& policy() const noexcept { return policy_; }

    /// Stable identifier used in reports, e.g. "drury_arveson(3)".
    std::string name() const;

    /// Throws DomainError unless p lies in the admissible domain.
    void check_point(const Point& p) const;
    void check_points(const PointSet& pts) const;

private:
    KernelSpec(KernelFamily f, std::size_t dim) : family_(f), dim_(dim) {}

    KernelFamily family_;
    std::size_t dim_;
    std::optional<DiagonalWeights> weights_;
    SeriesPolicy policy_;
};

/// Dense complex Hermitian matrix. Construction symmetrizes the input as
/// (M + M*)/2, so entries(i,j) == conj(entries(j,i)) holds bit-for-bit.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Eigen::MatrixXcd& m);

    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }

    HermitianMatrix principal(const std::vector<std::size_t>& indices) const;

private:
    Eigen::MatrixXcd m_;
};

/// Ascending eigenvalues. Throws NumericalError if the solver fails.
Eigen::VectorXd eigenvalues(const HermitianMatrix& m);
double min_eigenvalue(const HermitianMatrix& m);
double spectral_radius(const HermitianMatrix& m);
/// min_eigenvalue(m) >= -tol * max(1, spectral_radius(m))
bool is_psd(const HermitianMatrix& m, double tol = kDefaultPsdTol);

/// Smallest eigenvalue together with the PSD verdict, from one decomposition.
struct PsdCheck {
    double min_eig;
    double spectral_radius;
    bool psd;
    /// |min_eig| lies inside the tolerance band.
    bool marginal;
};
PsdCheck check_psd(const HermitianMatrix& m, double tol = kDefaultPsdTol);

Complex eval_kernel(const KernelSpec& spec, const Point& x, const Point& y);
HermitianMatrix gram(const KernelSpec& spec, const PointSet& pts);

}  // namespace picklab
