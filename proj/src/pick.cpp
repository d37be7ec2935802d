#include "picklab/pick.hpp"

#include <algorithm>
#include <cmath>

#include "picklab/errors.hpp"

namespace picklab {

std::string to_string(Claim c) { return c == Claim::refuted ? "refuted" : "consistent"; }

NormalizedKernel::NormalizedKernel(KernelSpec spec, Point x0) : spec_(std::move(spec)), x0_(std::move(x0)) {
    const Complex k00 = eval_kernel(spec_, x0_, x0_);
    if (!(k00.real() > kZeroKernelTol)) throw ZeroKernelError("normalize: K(x0, x0) is not positive");
    k00_ = k00.real();
}

Complex NormalizedKernel::operator()(const Point& x, const Point& y) const {
    const Complex kx0 = eval_kernel(spec_, x, x0_);
    const Complex k0y = eval_kernel(spec_, x0_, y);
    if (std::abs(kx0) < kZeroKernelTol || std::abs(k0y) < kZeroKernelTol)
        throw ZeroKernelError("normalize: K(x, x0) vanishes");
    return eval_kernel(spec_, x, y) * k00_ / (kx0 * k0y);
}

NormalizedKernel normalize(const KernelSpec& spec, const PointSet& pts, const Point& x0) {
    spec.check_points(pts);
    NormalizedKernel nk(spec, x0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(eval_kernel(spec, pts[i], x0)) < kZeroKernelTol)
            throw ZeroKernelError("normalize: K(x_" + std::to_string(i) + ", x0) vanishes");
    }
    return nk;
}

HermitianMatrix cnp_defect(const KernelSpec& spec, const PointSet& pts, const Point& x0) {
    spec.check_points(pts);
    spec.check_point(x0);
    const auto n = static_cast<Eigen::Index>(pts.size());
    const double k00 = eval_kernel(spec, x0, x0).real();
    if (!(k00 > kZeroKernelTol)) throw ZeroKernelError("cnp_defect: K(x0, x0) is not positive");

    std::vector<Complex> kx0(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        kx0[i] = eval_kernel(spec, pts[i], x0);
        if (std::abs(kx0[i]) < kZeroKernelTol)
            throw ZeroKernelError("cnp_defect: K(x_" + std::to_string(i) + ", x0) vanishes");
    }

    Eigen::MatrixXcd f(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Complex kij = eval_kernel(spec, pts[i], pts[j]);
            if (std::abs(kij) < kZeroKernelTol) {
                throw ZeroKernelError("cnp_defect: K(x_" + std::to_string(i) + ", x_" + std::to_string(j) +
                                      ") vanishes");
            }
            // K(x0, x_j) = conj(K(x_j, x0))
            f(i, j) = 1.0 - kx0[i] * std::conj(kx0[j]) / (kij * k00);
            f(j, i) = std::conj(f(i, j));
        }
    }
    return HermitianMatrix(f);
}

CnpVerdict complete_pick_verdict(const KernelSpec& spec, const PointSet& pts, const Point& x0, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("complete_pick_verdict: tol must be positive");
    CnpVerdict v;
    v.defect = cnp_defect(spec, pts, x0);
    const auto check = check_psd(v.defect, tol);
    v.psd = check.psd;
    v.min_eig = check.min_eig;
    v.spectral_radius = check.spectral_radius;
    v.marginal = check.marginal;
    v.tol = tol;
    v.base_point = x0;
    v.base_point_index = pts.find(x0);
    return v;
}

CnpVerdict complete_pick_verdict(const KernelSpec& spec, const PointSet& pts, double tol) {
    if (!pts.base_index()) throw InvalidArgument("complete_pick_verdict: point set has no base index");
    return complete_pick_verdict(spec, pts, pts[*pts.base_index()], tol);
}

std::vector<CnpVerdict> base_point_verdicts(const KernelSpec& spec, const PointSet& pts,
                                            const std::vector<Point>& candidates, double tol) {
    if (candidates.empty()) throw InvalidArgument("base_point_verdicts: no candidate base points");
    const PointSet all = pts.merged_with(candidates);
    std::vector<CnpVerdict> out;
    out.reserve(candidates.size());
    for (const auto& x0 : candidates) out.push_back(complete_pick_verdict(spec, all, x0, tol));
    return out;
}

bool base_point_invariance(const KernelSpec& spec, const PointSet& pts, const std::vector<Point>& candidates,
                           double tol) {
    const auto verdicts = base_point_verdicts(spec, pts, candidates, tol);
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [&](const CnpVerdict& v) { return v.psd == verdicts.front().psd; });
}

// ------------------------------------------------------------ feature map

HermitianMatrix FeatureMap::inner_products() const { return HermitianMatrix(rows * rows.adjoint()); }

HermitianMatrix FeatureMap::kernel() const {
    const Eigen::MatrixXcd f = rows * rows.adjoint();
    const Eigen::MatrixXcd k = (Eigen::MatrixXcd::Ones(f.rows(), f.cols()) - f).cwiseInverse();
    return HermitianMatrix(k);
}

FeatureMap feature_map(const HermitianMatrix& defect, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("feature_map: tol must be positive");
    const auto n = static_cast<Eigen::Index>(defect.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (defect(i, i).real() >= 1.0) {
            throw DiagonalTooLargeError("feature_map: F[" + std::to_string(i) + "][" + std::to_string(i) +
                                        "] >= 1, no contractive feature vector exists");
        }
    }

    FeatureMap fm;
    fm.tol_used = tol;
    if (n == 0) {
        fm.rows.resize(0, 0);
        return fm;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(defect.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("feature_map: eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    const double lambda_max = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    if (ev(0) < -tol * std::max(1.0, lambda_max)) throw NotPsdError("feature_map: defect matrix is not PSD");

    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = n - 1; k >= 0; --k)
        if (ev(k) > tol * lambda_max && ev(k) > 0.0) keep.push_back(k);

    fm.rows.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        fm.rows.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(ev(keep[c]));
    return fm;
}

HermitianMatrix geometric_reconstruction(const FeatureMap& fm, std::size_t terms) {
    const Eigen::MatrixXcd f = fm.rows * fm.rows.adjoint();
    const auto n = f.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(f(i, j)) >= 1.0) {
                throw DivergenceError("geometric_reconstruction: |F[" + std::to_string(i) + "][" +
                                      std::to_string(j) + "]| >= 1");
            }
        }
    }
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Ones(n, n);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Ones(n, n);
    for (std::size_t k = 1; k <= terms; ++k) {
        power = power.cwiseProduct(f);
        sum += power;
    }
    return HermitianMatrix(sum);
}

// ------------------------------------------------------------------ Pick

HermitianMatrix pick_matrix(const KernelSpec& spec, const PointSet& nodes, const std::vector<Complex>& targets) {
    if (targets.size() != nodes.size()) {
        throw ArityError("pick: " + std::to_string(targets.size()) + " targets for " +
                         std::to_string(nodes.size()) + " nodes");
    }
    const HermitianMatrix k = gram(spec, nodes);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) p(i, j) = (1.0 - targets[i] * std::conj(targets[j])) * k(i, j);
    return HermitianMatrix(p);
}

PickResult pick_check(const KernelSpec& spec, const PointSet& nodes, const std::vector<Complex>& targets,
                      double tol) {
    PickResult r;
    r.pick_matrix = pick_matrix(spec, nodes, targets);
    const auto check = check_psd(r.pick_matrix, tol);
    r.feasible = check.psd;
    r.min_eig = check.min_eig;
    r.marginal = check.marginal;
    return r;
}

bool pick_feasible(const KernelSpec& spec, const PointSet& nodes, const std::vector<Complex>& targets,
                   double tol) {
    return pick_check(spec, nodes, targets, tol).feasible;
}

// ------------------------------------------------------ multiplier bound

double multiplier_norm_lower_bound(const KernelSpec& spec, const PointSet& pts,
                                   const std::vector<Complex>& h_values) {
    if (h_values.size() != pts.size()) {
        throw ArityError("mult-norm: " + std::to_string(h_values.size()) + " values for " +
                         std::to_string(pts.size()) + " points");
    }
    const HermitianMatrix k = gram(spec, pts);
    const double lo = min_eigenvalue(k);
    if (!(lo > kMinGramEigenvalue)) {
        throw SingularGramError("mult-norm: Gram matrix min eigenvalue " + std::to_string(lo) +
                                " is not above " + std::to_string(kMinGramEigenvalue));
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(k.matrix());
    if (llt.info() != Eigen::Success) throw SingularGramError("mult-norm: Cholesky factorization failed");

    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::VectorXcd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = h_values[i];
    const Eigen::MatrixXcd dkd = h.asDiagonal() * k.matrix() * h.conjugate().asDiagonal();

    // L^{-1} (D K D*) L^{-*}
    const Eigen::MatrixXcd left = llt.matrixL().solve(dkd);
    const Eigen::MatrixXcd whitened = llt.matrixL().solve(left.adjoint()).adjoint();
    const double top = eigenvalues(HermitianMatrix(whitened)).maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

}  // namespace picklab
