#include "oracles.hpp"

#include "teig/errors.hpp"
#include "teig/tensor3.hpp"

#include <gtest/gtest.h>

using namespace teig;

namespace {

Tensor3 tube_tensor(std::initializer_list<double> v) {
    Tensor3 t(1, 1, static_cast<Index>(v.size()));
    Index k = 0;
    for (double x : v) t(0, 0, k++) = x;
    return t;
}

} // namespace

TEST(Tprod, MatchesBlockCirculantOracle) {
    oracle::Gen g(11);
    for (int t = 0; t < 200; ++t) {
        const Index n = g.index(1, 8), m = g.index(1, 8), l = g.index(1, 8), p = g.index(1, 8);
        const Tensor3 A = g.tensor(n, m, p), B = g.tensor(m, l, p);
        EXPECT_LT(oracle::rel_diff(tprod(A, B), oracle::tprod(A, B)), 1e-10);
        EXPECT_LT(oracle::rel_diff(tprod(A, B), fold(oracle::bcirc(A) * unfold(B), p)), 1e-10);
    }
}

TEST(Tprod, RightIdentity) {
    oracle::Gen g(12);
    const Tensor3 A = g.tensor(3, 4, 5);
    EXPECT_LT(oracle::rel_diff(tprod(A, identity(4, 5)), A), 1e-14);
}

TEST(Tprod, TubeExample) {
    const Tensor3 c = tprod(tube_tensor({1, 2}), tube_tensor({3, 4}));
    EXPECT_NEAR(c(0, 0, 0).real(), 11.0, 1e-13);
    EXPECT_NEAR(c(0, 0, 1).real(), 10.0, 1e-13);
    EXPECT_EQ(c(0, 0, 0).imag(), 0.0);
}

TEST(Tprod, TubesCommute) {
    oracle::Gen g(13);
    for (int t = 0; t < 50; ++t) {
        const Index p = g.index(1, 9);
        const Tensor3 a = g.tensor(1, 1, p), b = g.tensor(1, 1, p);
        EXPECT_LT(frob_norm(tprod(a, b) - tprod(b, a)), 1e-12);
    }
}

TEST(Tprod, AssociativeAndBilinear) {
    oracle::Gen g(14);
    for (int t = 0; t < 50; ++t) {
        const Tensor3 A = g.tensor(3, 3, 4), B = g.tensor(3, 3, 4), C = g.tensor(3, 3, 4);
        EXPECT_LT(oracle::rel_diff(tprod(A, tprod(B, C)), tprod(tprod(A, B), C)), 1e-10);
        const cplx s = g.cnormal();
        EXPECT_LT(oracle::rel_diff(tprod(A, B + s * C), tprod(A, B) + s * tprod(A, C)), 1e-10);
    }
}

TEST(Tprod, ShapeMismatchThrows) {
    EXPECT_THROW(tprod(Tensor3(2, 3, 2), Tensor3(2, 3, 2)), ShapeError);
    EXPECT_THROW(tprod(Tensor3(2, 2, 2), Tensor3(2, 2, 3)), ShapeError);
}

TEST(Tprod, RealInputsGiveExactlyRealOutput) {
    oracle::Gen g(15);
    const Tensor3 C = tprod(g.tensor(3, 2, 5, false), g.tensor(2, 4, 5, false));
    for (const auto& v : C.data()) EXPECT_EQ(v.imag(), 0.0);
}

TEST(Transpose, IdentityAndInvolution) {
    EXPECT_EQ(frob_norm(ttranspose(identity(3, 4)) - identity(3, 4)), 0.0);
    oracle::Gen g(16);
    const Tensor3 A = g.tensor(2, 3, 4);
    EXPECT_EQ(frob_norm(ttranspose(ttranspose(A)) - A), 0.0);
}

TEST(Transpose, BcircOfTransposeIsAdjoint) {
    oracle::Gen g(17);
    const Tensor3 A = g.tensor(2, 3, 4);
    EXPECT_LT((oracle::bcirc(ttranspose(A)) - oracle::bcirc(A).adjoint()).norm(), 1e-14);
}

TEST(Transpose, ProductRule) {
    oracle::Gen g(18);
    for (int t = 0; t < 50; ++t) {
        const Index p = g.index(1, 6);
        const Tensor3 A = g.tensor(g.index(1, 4), 3, p), B = g.tensor(3, g.index(1, 4), p);
        EXPECT_LT(oracle::rel_diff(ttranspose(tprod(A, B)), tprod(ttranspose(B), ttranspose(A))), 1e-10);
    }
}

TEST(Identity, TubeAndProducts) {
    const Tensor3 e = identity(1, 5);
    EXPECT_EQ(e(0, 0, 0), cplx{1.0});
    for (Index k = 1; k < 5; ++k) EXPECT_EQ(e(0, 0, k), cplx{0.0});
    EXPECT_LT(frob_norm(tprod(identity(3, 4), identity(3, 4)) - identity(3, 4)), 1e-14);
    EXPECT_EQ((bcirc_explicit(identity(2, 3)) - Eigen::MatrixXcd::Identity(6, 6)).norm(), 0.0);
}

TEST(Bcirc, MatchesOracleAndCirculant) {
    oracle::Gen g(19);
    const Tensor3 A = g.tensor(3, 2, 4);
    EXPECT_EQ((bcirc_explicit(A) - oracle::bcirc(A)).norm(), 0.0);

    const Tensor3 single = g.tensor(3, 3, 1);
    EXPECT_EQ((bcirc_explicit(single) - Eigen::MatrixXcd(single.slice(0))).norm(), 0.0);

    const Tensor3 v = tube_tensor({1, 2, 3});
    Eigen::Matrix3cd expected;
    expected << 1, 3, 2, 2, 1, 3, 3, 2, 1;
    EXPECT_EQ((bcirc_explicit(v) - expected).norm(), 0.0);
}

TEST(Bcirc, EigenvaluesAreSliceEigenvalues) {
    oracle::Gen g(20);
    const Tensor3 A = g.tensor(3, 3, 4);
    std::vector<cplx> slices;
    for (Index k = 0; k < 4; ++k) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(oracle::fourier_slice(A, k), false);
        for (Index i = 0; i < 3; ++i) slices.push_back(es.eigenvalues()(i));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(bcirc_explicit(A), false);
    std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + 12);
    EXPECT_LT(oracle::multiset_distance(slices, dense), 1e-10);
}

TEST(Bcirc, RefusesHugeMatrices) { EXPECT_THROW(bcirc_explicit(Tensor3(100, 100, 30)), std::exception); }

TEST(Norms, FrobeniusIdentities) {
    EXPECT_EQ(frob_norm(Tensor3(2, 3, 4)), 0.0);
    oracle::Gen g(21);
    const Tensor3 A = g.tensor(3, 2, 5);
    const cplx aa = frob_inner(A, A);
    EXPECT_NEAR(aa.real(), std::pow(frob_norm(A), 2), 1e-12 * aa.real());
    EXPECT_EQ(aa.imag(), 0.0);
    EXPECT_NEAR(std::pow(frob_norm(A), 2), oracle::bcirc(A).squaredNorm() / 5.0, 1e-12 * aa.real());
}

TEST(Bilinear, UnitColumnGivesIdentityTube) {
    Tensor3 X(3, 1, 4);
    X(0, 0, 0) = 1.0;
    const Tubular b = bilinear(X, X);
    EXPECT_NEAR(std::abs(b[0] - 1.0), 0.0, 1e-15);
    for (Index k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(b[k]), 0.0, 1e-15);
}

TEST(Bilinear, ScalarCaseIsCirculantQuadraticForm) {
    oracle::Gen g(22);
    const Index p = 5;
    const Tensor3 a = g.tensor(1, 1, p), x = g.tensor(1, 1, p);
    std::vector<cplx> av(a.data().begin(), a.data().end());
    const Eigen::Map<const Eigen::VectorXcd> xv(x.data().data(), p);
    const cplx expected = xv.dot(oracle::circ(av) * xv);
    EXPECT_NEAR(std::abs(bilinear(x, tprod(a, x))[0] - expected), 0.0, 1e-12);
}

TEST(Bilinear, SwappedArgumentsGiveAdjoint) {
    oracle::Gen g(23);
    const Tensor3 X = g.tensor(4, 1, 5), Y = g.tensor(4, 1, 5);
    const Tubular xy = bilinear(X, Y), yx = bilinear(Y, X).adjoint();
    for (Index k = 0; k < 5; ++k) EXPECT_NEAR(std::abs(xy[k] - yx[k]), 0.0, 1e-12);
}

TEST(TubularNorm, ZeroHomogeneityAndParseval) {
    const Tubular z = tubular_norm(Tensor3(3, 1, 4));
    for (Index k = 0; k < 4; ++k) EXPECT_EQ(std::abs(z[k]), 0.0);

    oracle::Gen g(24);
    const Tensor3 X = g.tensor(3, 1, 6);
    const cplx s = g.cnormal();
    const Tubular n1 = tubular_norm(s * X), n2 = tubular_norm(X);
    for (Index k = 0; k < 6; ++k) EXPECT_NEAR(std::abs(n1[k] - std::abs(s) * n2[k]), 0.0, 1e-12);

    // first entry of <X,X> is sum_i ||x~_i||^2 / p = ||X||_F^2
    const Tubular sq = n2 * n2;
    double sum = 0;
    for (Index k = 0; k < 6; ++k) sum += oracle::fourier_slice(X, k).squaredNorm() / 6.0;
    EXPECT_NEAR(sq[0].real(), sum, 1e-12 * sum);
    EXPECT_NEAR(sq[0].real(), std::pow(frob_norm(X), 2), 1e-12 * sum);
}

TEST(TubularNorm, CauchySchwarzAndTriangleComponentwise) {
    oracle::Gen g(25);
    for (int t = 0; t < 100; ++t) {
        const Index n = g.index(1, 5), p = g.index(1, 7);
        const Tensor3 X = g.tensor(n, 1, p), Y = g.tensor(n, 1, p);
        const auto inner = bilinear(X, Y).components();
        const auto nx = tubular_norm(X).components(), ny = tubular_norm(Y).components(),
                   nxy = tubular_norm(X + Y).components();
        for (Index k = 0; k < p; ++k) {
            EXPECT_LE(std::abs(inner[k].real()), nx[k].real() * ny[k].real() + 1e-12);
            EXPECT_LE(nxy[k].real(), nx[k].real() + ny[k].real() + 1e-12);
        }
    }
}

TEST(Tensor3, FourierCacheDropsOnMutation) {
    oracle::Gen g(26);
    Tensor3 A = g.tensor(2, 2, 3);
    const Tensor3 before = tprod(A, A);
    A(0, 0, 1) += 1.0;
    EXPECT_LT(oracle::rel_diff(tprod(A, A), oracle::tprod(A, A)), 1e-13);
    EXPECT_GT(frob_norm(tprod(A, A) - before), 1e-3);
}

TEST(Tensor3, CopiesAreIndependent) {
    oracle::Gen g(27);
    Tensor3 A = g.tensor(2, 2, 3);
    (void)tprod(A, A);
    Tensor3 B = A;
    B.slice(2).setZero();
    EXPECT_LT(oracle::rel_diff(tprod(B, B), oracle::tprod(B, B)), 1e-13);
    EXPECT_LT(oracle::rel_diff(tprod(A, A), oracle::tprod(A, A)), 1e-13);
}

TEST(Tensor3, RejectsBadShapes) {
    EXPECT_THROW(Tensor3(0, 1, 1), ShapeError);
    EXPECT_THROW(Tensor3(2, 2, 2) + Tensor3(2, 2, 3), ShapeError);
}

TEST(Tensor3, UnfoldFoldRoundTrip) {
    oracle::Gen g(28);
    const Tensor3 A = g.tensor(3, 2, 4);
    EXPECT_EQ(frob_norm(fold(unfold(A), 4) - A), 0.0);
    EXPECT_THROW(fold(Eigen::MatrixXcd(7, 2), 4), ShapeError);
}

TEST(Tensor3, LateralSlices) {
    oracle::Gen g(29);
    const Tensor3 A = g.tensor(3, 4, 2);
    std::vector<Tensor3> cols;
    for (Index j = 0; j < 4; ++j) cols.push_back(lateral(A, j));
    EXPECT_EQ(frob_norm(lateral_concat(cols) - A), 0.0);
}

TEST(Tinverse, InvertsAndReportsSingularSlices) {
    oracle::Gen g(30);
    const Tensor3 A = g.tensor(3, 3, 4);
    EXPECT_LT(frob_norm(tprod(A, tinverse(A)) - identity(3, 4)), 1e-10);
    // every frontal slice equal: Fourier slices 1..p-1 vanish
    Tensor3 S(2, 2, 3);
    for (Index k = 0; k < 3; ++k) S.slice(k) = Eigen::Matrix2cd::Identity();
    EXPECT_THROW(tinverse(S), SingularError);
}

TEST(Hermitian, DetectsSymmetry) {
    oracle::Gen g(31);
    EXPECT_TRUE(is_hermitian(g.hermitian(3, 5)));
    EXPECT_FALSE(is_hermitian(g.tensor(3, 3, 5)));
}
