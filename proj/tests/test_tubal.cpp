#include "oracles.hpp"

#include "teig/errors.hpp"
#include "teig/tubal.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace teig;

namespace {

Tubular from_real(std::initializer_list<double> v) {
    std::vector<cplx> e(v.begin(), v.end());
    return Tubular(e);
}

Tubular from_real_components(std::initializer_list<double> d) {
    std::vector<cplx> c(d.begin(), d.end());
    return Tubular::from_components(c);
}

// Hermitian tube: components real.
Tubular random_hermitian_tube(oracle::Gen& g, Index p, double shift) {
    std::vector<cplx> d(static_cast<std::size_t>(p));
    for (auto& x : d) x = g.normal() + shift;
    return Tubular::from_components(d);
}

double tube_diff(const Tubular& a, const Tubular& b) { return oracle::max_abs_diff(a.entries(), b.entries()); }

} // namespace

TEST(Circ, Layout) {
    EXPECT_EQ((circ_matrix(from_real({1, 0, 0})) - Eigen::MatrixXcd::Identity(3, 3)).norm(), 0.0);
    Eigen::Matrix2cd expected;
    expected << 1, 2, 2, 1;
    EXPECT_EQ((circ_matrix(from_real({1, 2})) - expected).norm(), 0.0);
}

TEST(Circ, ProductIsConvolution) {
    oracle::Gen g(51);
    for (int t = 0; t < 20; ++t) {
        const Index p = g.index(1, 9);
        const Tubular a = g.tube(p), b = g.tube(p);
        EXPECT_LT((circ_matrix(a) * circ_matrix(b) - circ_matrix(a * b)).norm(), 1e-12);
        EXPECT_EQ((circ_matrix(a) - oracle::circ(a.entries())).norm(), 0.0);
    }
}

TEST(TubInverse, Examples) {
    EXPECT_LT(tube_diff(tub_inverse(Tubular::unit(5)), Tubular::unit(5)), 1e-15);
    const Tubular half = tub_inverse(from_real({2, 0, 0, 0}));
    EXPECT_LT(tube_diff(half, from_real({0.5, 0, 0, 0})), 1e-15);
    try {
        tub_inverse(from_real({1, 1}));
        FAIL() << "expected SingularError";
    } catch (const SingularError& e) {
        ASSERT_EQ(e.offending().size(), 1u);
        EXPECT_EQ(e.offending()[0].index, 1u);
    }
}

TEST(TubInverse, MatchesDenseInverseAndReciprocalFunction) {
    oracle::Gen g(52);
    for (int t = 0; t < 50; ++t) {
        const Index p = g.index(1, 10);
        const Tubular v = g.tube(p);
        const Tubular inv = tub_inverse(v);
        EXPECT_LT((circ_matrix(inv) - circ_matrix(v).inverse()).norm(), 1e-9 * circ_matrix(v).inverse().norm());
        EXPECT_LT(tube_diff(tub_func(v, [](cplx x) { return 1.0 / x; }), inv), 1e-12 * (1 + circ_matrix(inv).norm()));
    }
}

TEST(TubInverse, PermutedEntriesGiveSingularDifference) {
    oracle::Gen g(53);
    for (int t = 0; t < 50; ++t) {
        const Index p = g.index(2, 8);
        const Tubular a = g.tube(p, false);
        auto e = a.entries();
        std::shuffle(e.begin(), e.end(), g.eng);
        const Tubular diff = a - Tubular(e);
        EXPECT_LT(std::abs(diff.components()[0]), 1e-12);
        EXPECT_THROW(tub_inverse(diff), SingularError);
    }
}

TEST(TubFunc, Examples) {
    oracle::Gen g(54);
    const Tubular v = g.tube(6);
    EXPECT_LT(tube_diff(tub_func(v, [](cplx x) { return x; }), v), 1e-13);
    EXPECT_LT(tube_diff(tub_func(v, [](cplx x) { return x * x; }), v * v), 1e-12);
    EXPECT_LT(tube_diff(tub_func(v, [](cplx) { return cplx{1.0}; }), Tubular::unit(6)), 1e-15);
    EXPECT_THROW(tub_func(from_real({1, 1}), [](cplx x) { return 1.0 / x; }), DomainError);
    EXPECT_THROW(tub_func_real(g.tube(4), [](double x) { return x; }), NotHermitianError);
}

TEST(TubSqrt, Examples) {
    EXPECT_LT(tube_diff(tub_sqrt(Tubular::unit(4)), Tubular::unit(4)), 1e-15);
    EXPECT_LT(tube_diff(tub_sqrt(from_real({4, 0, 0})), from_real({2, 0, 0})), 1e-15);
    EXPECT_THROW(tub_sqrt(from_real({0, 1})), NotHPDError);
}

TEST(TubSqrt, SquaresBack) {
    oracle::Gen g(55);
    for (int t = 0; t < 200; ++t) {
        const Index p = g.index(1, 16);
        std::vector<cplx> d(static_cast<std::size_t>(p));
        for (auto& x : d) x = std::exp(g.uniform(-3, 3));
        const Tubular v = Tubular::from_components(d), w = tub_sqrt(v);
        const Eigen::MatrixXcd C = oracle::circ(w.entries());
        const Eigen::VectorXcd first = (C * C).col(0);
        for (Index k = 0; k < p; ++k) EXPECT_NEAR(std::abs(first(k) - v[k]), 0.0, 1e-12 * (1 + std::abs(v[0])));
        EXPECT_TRUE(tub_is_hpd(w));
    }
}

TEST(TubIsHpd, Examples) {
    EXPECT_TRUE(tub_is_hpd(Tubular::unit(3)));
    EXPECT_FALSE(tub_is_hpd(from_real({0, 1})));
    oracle::Gen g(56);
    for (int t = 0; t < 20; ++t) {
        const Tubular a = g.tube(g.index(1, 8));
        EXPECT_TRUE(tub_is_hpd(a * a.adjoint()));
    }
}

TEST(TubIsHpd, AgreesWithDenseCirculant) {
    oracle::Gen g(57);
    int disagreements = 0;
    for (int t = 0; t < 500; ++t) {
        const Index p = g.index(1, 12);
        const Tubular v = random_hermitian_tube(g, p, g.uniform(-1, 3));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::circ(v.entries()), Eigen::EigenvaluesOnly);
        if (static_cast<bool>(tub_is_hpd(v)) != (es.eigenvalues()(0) > 1e-10)) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0);
}

TEST(TubIsHpd, ReportsOffendingComponents) {
    const auto r = tub_is_hpd(from_real_components({1, -2, 3}));
    EXPECT_FALSE(r);
    ASSERT_EQ(r.offending.size(), 1u);
    EXPECT_EQ(r.offending[0], 1u);
}

TEST(TubOrder, Examples) {
    oracle::Gen g(58);
    const Tubular v = random_hermitian_tube(g, 4, 0);
    EXPECT_EQ(tub_order_cmp(v, v), Order::equal);
    EXPECT_EQ(tub_order_cmp(from_real_components({1, 2}), from_real_components({3, 5})), Order::less);
    EXPECT_EQ(tub_order_cmp(from_real_components({3, 5}), from_real_components({1, 2})), Order::greater);
    EXPECT_EQ(tub_order_cmp(from_real_components({1, 5}), from_real_components({3, 2})), Order::incomparable);
    EXPECT_THROW(tub_order_cmp(g.tube(3), g.tube(3)), NotHermitianError);
}

TEST(TubOrder, Transitive) {
    oracle::Gen g(59);
    int chains = 0;
    for (int t = 0; t < 2000; ++t) {
        const Index p = g.index(1, 3);
        const Tubular a = random_hermitian_tube(g, p, 0), b = random_hermitian_tube(g, p, 0),
                      c = random_hermitian_tube(g, p, 0);
        const auto ab = tub_order_cmp(a, b), bc = tub_order_cmp(b, c);
        if ((ab == Order::less || ab == Order::equal) && (bc == Order::less || bc == Order::equal)) {
            ++chains;
            const auto ac = tub_order_cmp(a, c);
            EXPECT_TRUE(ac == Order::less || ac == Order::equal);
        }
    }
    EXPECT_GT(chains, 50);
}

TEST(TubHermitian, Detection) {
    oracle::Gen g(60);
    EXPECT_TRUE(tub_is_hermitian(random_hermitian_tube(g, 5, 0)));
    EXPECT_TRUE(tub_is_hermitian(from_real({2, 1, 1})));
    EXPECT_FALSE(tub_is_hermitian(from_real({2, 1, 0})));
    const auto re = hermitian_components(from_real({2, 1, 1}));
    EXPECT_NEAR(re[0], 4.0, 1e-14);
    EXPECT_NEAR(re[1], 1.0, 1e-14);
}

TEST(Dtensor, IdentityAndProducts) {
    EXPECT_LT(frob_norm(dtensor_from_tubular(Tubular::unit(4), 3) - identity(3, 4)), 1e-15);
    oracle::Gen g(61);
    const Tubular a = g.tube(5);
    const Tensor3 D = dtensor_from_tubular(a, 3), X = g.tensor(3, 2, 5);
    EXPECT_LT(oracle::rel_diff(tprod(D, X), tube_scale(X, a)), 1e-12);
    EXPECT_LT(oracle::rel_diff(tprod(D, X), oracle::tprod(D, X)), 1e-12);

    // bcirc(D) is circ([a]) interleaved with I_3
    const Eigen::MatrixXcd B = bcirc_explicit(D), C = oracle::circ(a.entries());
    for (Index r = 0; r < 15; ++r)
        for (Index c = 0; c < 15; ++c) {
            const cplx expected = (r % 3 == c % 3) ? C(r / 3, c / 3) : cplx{0.0};
            EXPECT_EQ(B(r, c), expected);
        }
}
