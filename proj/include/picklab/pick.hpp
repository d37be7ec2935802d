#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "picklab/kernel.hpp"

namespace picklab {

/// Kernels with |K| below this are treated as vanishing.
inline constexpr double kZeroKernelTol = 1e-14;

/// K'(x,y) = K(x,y) K(x0,x0) / (K(x,x0) K(x0,y)), so that K'(x, x0) = 1.
class NormalizedKernel {
public:
    NormalizedKernel(KernelSpec spec, Point x0);

    Complex operator()(const Point& x, const Point& y) const;

    const KernelSpec& spec() const noexcept { return spec_; }
    const Point& base_point() const noexcept { return x0_; }

private:
    KernelSpec spec_;
    Point x0_;
    double k00_;
};

/// Builds the normalized evaluator after checking K(x, x0) != 0 on every
/// sampled point. Throws ZeroKernelError otherwise.
NormalizedKernel normalize(const KernelSpec& spec, const PointSet& pts, const Point& x0);

/// Matrix of F(x_i, x_j) = 1 - K(x_i,x0) K(x0,x_j) / (K(x_i,x_j) K(x0,x0)).
HermitianMatrix cnp_defect(const KernelSpec& spec, const PointSet& pts, const Point& x0);

/// Strongest claim a finite sample supports. A PSD defect on a finite set is
/// only consistent with the complete Pick property; a negative eigenvalue
/// refutes it.
enum class Claim { refuted, consistent };
std::string to_string(Claim c);

struct CnpVerdict {
    bool psd = false;
    double min_eig = 0.0;
    double spectral_radius = 0.0;
    bool marginal = false;
    double tol = kDefaultPsdTol;
    HermitianMatrix defect;
    Point base_point;
    /// Position of the base point inside the tested set, if it belongs to it.
    std::optional<std::size_t> base_point_index;

    Claim claim() const noexcept { return psd ? Claim::consistent : Claim::refuted; }
};

CnpVerdict complete_pick_verdict(const KernelSpec& spec, const PointSet& pts, const Point& x0,
                                 double tol = kDefaultPsdTol);
/// Uses pts[base_index] as x0. Throws InvalidArgument if pts has no base index.
CnpVerdict complete_pick_verdict(const KernelSpec& spec, const PointSet& pts,
                                 double tol = kDefaultPsdTol);

/// Runs complete_pick_verdict once per candidate base point on the common set
/// pts ∪ candidates, so every verdict concerns the same finite kernel.
std::vector<CnpVerdict> base_point_verdicts(const KernelSpec& spec, const PointSet& pts,
                                            const std::vector<Point>& candidates,
                                            double tol = kDefaultPsdTol);
/// True iff all base_point_verdicts agree on psd.
bool base_point_invariance(const KernelSpec& spec, const PointSet& pts,
                           const std::vector<Point>& candidates, double tol = kDefaultPsdTol);

/// Rows b_i (n x r) with b_i · conj(b_j) = F_ij, realizing
/// K'(x_i, x_j) = 1 / (1 - b_i · conj(b_j)).
struct FeatureMap {
    Eigen::MatrixXcd rows;
    double tol_used = kDefaultPsdTol;

    std::size_t size() const noexcept { return static_cast<std::size_t>(rows.rows()); }
    std::size_t rank() const noexcept { return static_cast<std::size_t>(rows.cols()); }
    /// Entrywise b_i · conj(b_j).
    HermitianMatrix inner_products() const;
    /// Entrywise 1 / (1 - b_i · conj(b_j)).
    HermitianMatrix kernel() const;
};

/// Eigendecomposition-based factorization of a PSD defect matrix.
/// Eigenvalues <= tol * lambda_max are dropped.
FeatureMap feature_map(const HermitianMatrix& defect, double tol = kDefaultPsdTol);

/// Entrywise partial geometric sums sum_{n=0}^{N} (b_i · conj(b_j))^n.
HermitianMatrix geometric_reconstruction(const FeatureMap& fm, std::size_t terms);

struct PickResult {
    bool feasible = false;
    double min_eig = 0.0;
    bool marginal = false;
    HermitianMatrix pick_matrix;
};

/// P_ij = (1 - w_i conj(w_j)) K(x_i, x_j).
HermitianMatrix pick_matrix(const KernelSpec& spec, const PointSet& nodes,
                            const std::vector<Complex>& targets);
PickResult pick_check(const KernelSpec& spec, const PointSet& nodes,
                      const std::vector<Complex>& targets, double tol = kDefaultPsdTol);
bool pick_feasible(const KernelSpec& spec, const PointSet& nodes,
                   const std::vector<Complex>& targets, double tol = kDefaultPsdTol);

/// Minimum Gram eigenvalue accepted by multiplier_norm_lower_bound.
inline constexpr double kMinGramEigenvalue = 1e-10;

/// Smallest c with ((c^2 - h_i conj(h_j)) K_ij) PSD, i.e. the square root of
/// the top generalized eigenvalue of (D K D*, K). Throws SingularGramError
/// when K is numerically singular.
double multiplier_norm_lower_bound(const KernelSpec& spec, const PointSet& pts,
                                   const std::vector<Complex>& h_values);

}  // namespace picklab
