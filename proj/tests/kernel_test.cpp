#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "picklab/errors.hpp"
#include "picklab/kernel.hpp"

using namespace picklab;

namespace {

Eigen::MatrixXcd mat2(Complex a, Complex b, Complex c, Complex d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

// Random admissible point set for each built-in family.
PointSet random_points(const KernelSpec& spec, Rng& rng, std::size_t n) {
    switch (spec.family()) {
        case KernelFamily::drury_arveson:
            return PointSet(spec.dim(), oracle::random_ball_points(rng, n, spec.dim(), 0.9));
        case KernelFamily::segal_bargmann_hardy: {
            std::vector<Point> pts;
            for (std::size_t i = 0; i < n; ++i) pts.push_back(Point{rng.in_disk(2.0), rng.in_disk(0.9)});
            return PointSet(2, std::move(pts));
        }
        default: return PointSet::scalar(oracle::random_disk_points(rng, n, 0.9));
    }
}

std::vector<KernelSpec> all_families() {
    return {KernelSpec::szego(),
            KernelSpec::bergman(),
            KernelSpec::drury_arveson(1),
            KernelSpec::drury_arveson(3),
            KernelSpec::diagonal(DiagonalWeights::constant(1.0)),
            KernelSpec::diagonal(DiagonalWeights::gkz()),
            KernelSpec::diagonal(DiagonalWeights::explicit_list({1.0, 0.5, 0.25, 2.0})),
            KernelSpec::segal_bargmann_hardy()};
}

}  // namespace

TEST(EvalKernel, SzegoClosedForm) {
    const auto k = eval_kernel(KernelSpec::szego(), Point{0.5}, Point{0.5});
    EXPECT_NEAR(k.real(), 4.0 / 3.0, 1e-15);
    EXPECT_EQ(k.imag(), 0.0);
}

TEST(EvalKernel, SegalBargmannHardyNormalizedAtOrigin) {
    const auto spec = KernelSpec::segal_bargmann_hardy();
    for (const Point& y : {Point{0.0, 0.0}, Point{3.0, 0.5}, Point{Complex(-7.0, 2.0), Complex(0.2, -0.6)}}) {
        const auto k = eval_kernel(spec, Point{0.0, 0.0}, y);
        EXPECT_EQ(k, Complex(1.0, 0.0));
    }
}

TEST(EvalKernel, DiagonalUnitWeightsMatchGeometricOracle) {
    const auto spec = KernelSpec::diagonal(DiagonalWeights::constant(1.0));
    const auto k = eval_kernel(spec, Point{0.3}, Point{0.2});
    const auto oracle_value = oracle::geometric_series(0.06);
    EXPECT_NEAR(std::abs(k - oracle_value), 0.0, 1e-14);
    EXPECT_NEAR(k.real(), 1.0 / (1.0 - 0.06), 1e-14);
}

TEST(EvalKernel, DiagonalComplexArgumentMatchesSzego) {
    const auto diag = KernelSpec::diagonal(DiagonalWeights::constant(1.0));
    const Point x{Complex(0.4, -0.3)}, y{Complex(-0.1, 0.7)};
    EXPECT_LT(std::abs(eval_kernel(diag, x, y) - eval_kernel(KernelSpec::szego(), x, y)), 1e-14);
}

TEST(EvalKernel, ExplicitListIsPolynomial) {
    const auto spec = KernelSpec::diagonal(DiagonalWeights::explicit_list({1.0, 2.0, 3.0}));
    const Complex u = 0.5 * 0.4;
    EXPECT_NEAR(std::abs(eval_kernel(spec, Point{0.5}, Point{0.4}) - (1.0 + 2.0 * u + 3.0 * u * u)), 0.0, 1e-15);
}

TEST(EvalKernel, GkzWeightsMatchDirectSum) {
    const auto spec = KernelSpec::diagonal(DiagonalWeights::gkz());
    const double u = 0.7 * 0.6;
    double direct = 0.0, un = 1.0;
    for (int n = 0; n < 2000; ++n) {
        const int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) + 1e-12));
        direct += std::tgamma(k + 1.0) * un;
        un *= u;
    }
    EXPECT_NEAR(eval_kernel(spec, Point{0.7}, Point{0.6}).real() / direct, 1.0, 1e-13);
}

TEST(EvalKernel, DrurArvesonInnerProduct) {
    const auto spec = KernelSpec::drury_arveson(2);
    const Point x{0.3, Complex(0.0, 0.4)}, y{0.5, 0.2};
    const Complex ip = 0.3 * 0.5 + Complex(0.0, 0.4) * 0.2;
    EXPECT_LT(std::abs(eval_kernel(spec, x, y) - 1.0 / (1.0 - ip)), 1e-15);
}

TEST(EvalKernel, DomainErrors) {
    EXPECT_THROW(eval_kernel(KernelSpec::szego(), Point{1.0}, Point{0.0}), DomainError);
    EXPECT_THROW(eval_kernel(KernelSpec::szego(), Point{1.0 - 1e-10}, Point{0.0}), DomainError);
    EXPECT_NO_THROW(eval_kernel(KernelSpec::szego(), Point{1.0 - 1e-8}, Point{0.0}));
    EXPECT_THROW(eval_kernel(KernelSpec::szego(), Point{0.1, 0.1}, Point{0.0}), DomainError);
    EXPECT_THROW(eval_kernel(KernelSpec::drury_arveson(2), Point{0.8, 0.7}, Point{0.0, 0.0}), DomainError);
    EXPECT_THROW(eval_kernel(KernelSpec::bergman(), Point{Complex(0.0, -1.5)}, Point{0.0}), DomainError);
    // z1 is unrestricted for the product kernel, z2 is not
    EXPECT_NO_THROW(eval_kernel(KernelSpec::segal_bargmann_hardy(), Point{10.0, 0.1}, Point{0.0, 0.0}));
    EXPECT_THROW(eval_kernel(KernelSpec::segal_bargmann_hardy(), Point{0.0, 1.0}, Point{0.0, 0.0}), DomainError);
}

TEST(EvalKernel, SlowSeriesRaisesConvergenceError) {
    SeriesPolicy tight;
    tight.max_terms = 50;
    const auto spec = KernelSpec::diagonal(DiagonalWeights::constant(1.0), tight);
    EXPECT_THROW(eval_kernel(spec, Point{0.99}, Point{0.99}), ConvergenceError);
    // gkz weights near the boundary: factorial growth beats 0.998^n for far longer than 10^5 terms
    EXPECT_THROW(eval_kernel(KernelSpec::diagonal(DiagonalWeights::gkz()), Point{0.999}, Point{0.999}),
                 ConvergenceError);
}

TEST(KernelSpec, InvalidWeights) {
    EXPECT_THROW(DiagonalWeights::explicit_list({1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(DiagonalWeights::explicit_list({}), InvalidArgument);
    EXPECT_THROW(DiagonalWeights::constant(-1.0), InvalidArgument);
    EXPECT_THROW(KernelSpec::drury_arveson(0), InvalidArgument);
}

TEST(PointSet, RejectsDuplicatesAndBadIndices) {
    EXPECT_THROW(PointSet::scalar({0.1, 0.1 + 1e-13}), InvalidArgument);
    EXPECT_NO_THROW(PointSet::scalar({0.1, 0.1 + 1e-11}));
    EXPECT_THROW(PointSet::scalar({0.1, 0.2}, 2), InvalidArgument);
    EXPECT_THROW(PointSet(2, {Point{0.1}}), InvalidArgument);
    EXPECT_THROW(PointSet(1, {}), InvalidArgument);
}

TEST(PointSet, MergeSkipsPresentPoints) {
    const auto pts = PointSet::scalar({0.1, 0.2});
    const auto merged = pts.merged_with({Point{0.2}, Point{0.3}});
    ASSERT_EQ(merged.size(), 3u);
    EXPECT_EQ(merged[2], Point{0.3});
    EXPECT_EQ(merged.find(Point{0.3}), std::optional<std::size_t>(2));
}

TEST(Gram, SinglePointAtOrigin) {
    const auto k = gram(KernelSpec::szego(), PointSet::scalar({0.0}));
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k(0, 0), Complex(1.0));
}

TEST(Gram, SzegoTwoPoints) {
    const auto k = gram(KernelSpec::szego(), PointSet::scalar({0.0, 0.5}));
    EXPECT_EQ(k(0, 0), Complex(1.0));
    EXPECT_EQ(k(0, 1), Complex(1.0));
    EXPECT_EQ(k(1, 0), Complex(1.0));
    EXPECT_NEAR(k(1, 1).real(), 4.0 / 3.0, 1e-15);
}

TEST(Gram, BergmanTwoPoints) {
    // 1/(1 - z conj(w))^2 at {0.5, 0.8}: 1 - 0.25 = 0.75, 1 - 0.4 = 0.6, 1 - 0.64 = 0.36
    const auto k = gram(KernelSpec::bergman(), PointSet::scalar({0.5, 0.8}));
    EXPECT_NEAR(k(0, 0).real(), 1.0 / (0.75 * 0.75), 1e-14);
    EXPECT_NEAR(k(0, 1).real(), 1.0 / (0.6 * 0.6), 1e-14);
    EXPECT_NEAR(k(1, 1).real(), 1.0 / (0.36 * 0.36), 1e-13);
}

TEST(Eigen, IdentityIsPsd) {
    const HermitianMatrix id(Eigen::MatrixXcd::Identity(2, 2));
    EXPECT_NEAR(min_eigenvalue(id), 1.0, 1e-15);
    EXPECT_TRUE(is_psd(id));
}

TEST(Eigen, IndefiniteTwoByTwo) {
    const HermitianMatrix m(mat2(1.0, 2.0, 2.0, 1.0));
    EXPECT_NEAR(min_eigenvalue(m), -1.0, 1e-14);
    EXPECT_NEAR(spectral_radius(m), 3.0, 1e-14);
    EXPECT_FALSE(is_psd(m));
}

TEST(Eigen, RankOneOuterProduct) {
    Eigen::VectorXcd v(2);
    v << 1.0, Complex(0.0, 1.0);
    const HermitianMatrix m(v * v.adjoint());
    EXPECT_NEAR(min_eigenvalue(m), 0.0, 1e-15);
    EXPECT_TRUE(is_psd(m));
}

TEST(Eigen, ToleranceIsRelativeToSpectralRadius) {
    // eigenvalues 1000 and -5e-7: within 1e-9 * 1000
    const HermitianMatrix m(mat2(1000.0, 0.0, 0.0, -5e-7));
    EXPECT_TRUE(is_psd(m, 1e-9));
    const HermitianMatrix small(mat2(1.0, 0.0, 0.0, -5e-7));
    EXPECT_FALSE(is_psd(small, 1e-9));
    EXPECT_TRUE(check_psd(m).marginal);
}

TEST(HermitianMatrix, SymmetrizationIsExact) {
    Eigen::MatrixXcd m(2, 2);
    m << Complex(1.0, 0.3), Complex(0.1, 0.2), Complex(0.3, -0.1), 2.0;
    const HermitianMatrix h(m);
    EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
    EXPECT_EQ(h(0, 0).imag(), 0.0);
    EXPECT_THROW(HermitianMatrix(Eigen::MatrixXcd::Zero(2, 3)), InvalidArgument);
}

// ---------------------------------------------------------------- properties

TEST(KernelProperties, HermitianSymmetry) {
    Rng rng(11);
    for (const auto& spec : all_families()) {
        for (int t = 0; t < 50; ++t) {
            const auto pts = random_points(spec, rng, 2);
            const Complex kxy = eval_kernel(spec, pts[0], pts[1]);
            const Complex kyx = eval_kernel(spec, pts[1], pts[0]);
            EXPECT_LE(std::abs(kxy - std::conj(kyx)), 1e-12 * (1.0 + std::abs(kxy))) << spec.name();
        }
    }
}

TEST(KernelProperties, GramIsPsd) {
    Rng rng(12);
    for (const auto& spec : all_families()) {
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 1 + rng.below(40);
            const auto pts = random_points(spec, rng, n);
            EXPECT_TRUE(is_psd(gram(spec, pts), 1e-9)) << spec.name() << " n=" << n;
        }
    }
}

TEST(KernelProperties, NormalizedAtOrigin) {
    Rng rng(13);
    for (const auto& spec : all_families()) {
        if (spec.weights() && (*spec.weights())(0) != 1.0) continue;
        const Point origin(std::vector<Complex>(spec.dim(), 0.0));
        const auto pts = random_points(spec, rng, 20);
        for (const auto& x : pts.points()) EXPECT_EQ(eval_kernel(spec, x, origin), Complex(1.0)) << spec.name();
    }
}

TEST(KernelProperties, CauchySchwarzEntrywise) {
    Rng rng(14);
    for (const auto& spec : all_families()) {
        const auto k = gram(spec, random_points(spec, rng, 25));
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = 0; j < k.size(); ++j) {
                const double bound = k(i, i).real() * k(j, j).real();
                EXPECT_LE(std::norm(k(i, j)), bound * (1.0 + 1e-10)) << spec.name();
            }
    }
}

TEST(KernelProperties, InterlacingOnPrincipalSubmatrices) {
    Rng rng(15);
    for (const auto& spec : all_families()) {
        const auto k = gram(spec, random_points(spec, rng, 12));
        const double full = min_eigenvalue(k);
        for (int t = 0; t < 10; ++t) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < k.size(); ++i)
                if (rng.uniform() < 0.5) idx.push_back(i);
            if (idx.empty()) continue;
            EXPECT_GE(min_eigenvalue(k.principal(idx)), full - 1e-10) << spec.name();
        }
    }
}

TEST(KernelProperties, EigenvaluesAgreeWithJacobiOracle) {
    Rng rng(16);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + rng.below(8);
        Eigen::MatrixXcd m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.in_disk(2.0);
        const HermitianMatrix h(m);
        const auto ours = eigenvalues(h);
        const auto ref = oracle::hermitian_eigenvalues(oracle::to_cmatrix(h));
        ASSERT_EQ(static_cast<std::size_t>(ours.size()), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ours(i), ref[i], 1e-11);
    }
}
