#include "sumcap/objective.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "sumcap/oracles.hpp"
#include "test_support.hpp"

using namespace sumcap;
using test::randomFeasibleCovariances;
using test::randomHermitian;

namespace {

ChannelSet scalarChannel(double h, double P) {
    ChannelSet c;
    c.K = 1;
    c.nt = 1;
    c.nr = 1;
    c.P = P;
    CMatrix m(1, 1);
    m(0, 0) = h;
    c.H.push_back(m);
    return c;
}

CovarianceSet scalarCov(double q) {
    Eigen::VectorXd d(1);
    d << q;
    CovarianceSet cov;
    cov.Q.push_back(HermMatrix::diagonal(d));
    return cov;
}

CovarianceSet zeroCov(const ChannelSet& c) {
    CovarianceSet q;
    for (int i = 0; i < c.K; ++i) q.Q.push_back(HermMatrix::zero(c.nr));
    return q;
}

}  // namespace

TEST(Objective, ZeroCovariancesGiveZero) {
    const ChannelSet c = generate_rayleigh(3, 4, 2, 5.0, 8);
    EXPECT_EQ(objective(zeroCov(c), c), 0.0);
}

TEST(Objective, ScalarLogOnePlusQ) {
    const ChannelSet c = scalarChannel(1.0, 1.0);
    EXPECT_NEAR(objective(scalarCov(1.0), c), std::log(2.0), 1e-15);
}

TEST(Objective, TwoScalarUsersShareTheArgument) {
    ChannelSet c = scalarChannel(1.0, 1.0);
    c.K = 2;
    c.H.push_back(c.H[0]);
    CovarianceSet q = scalarCov(0.5);
    q.Q.push_back(q.Q[0]);
    EXPECT_NEAR(objective(q, c), std::log(2.0), 1e-15);
}

TEST(Objective, DimensionMismatchThrows) {
    const ChannelSet c = generate_rayleigh(2, 2, 2, 1.0, 3);
    CovarianceSet q;
    q.Q.push_back(HermMatrix::zero(2));
    EXPECT_THROW(objective(q, c), InvalidInputError);  // wrong user count
    q.Q.push_back(HermMatrix::zero(3));
    EXPECT_THROW(objective(q, c), InvalidInputError);  // wrong block size
}

TEST(Objective, NonFiniteSumFailsNumerically) {
    ChannelSet c = scalarChannel(1e200, 1.0);
    EXPECT_THROW(objective(scalarCov(1e200), c), NumericFailureError);
}

TEST(Objective, IndefiniteArgumentFailsNumerically) {
    // A covariance negative enough to push I + H'QH past singular.
    const ChannelSet c = scalarChannel(1.0, 1.0);
    EXPECT_THROW(objective(scalarCov(-5.0), c), NumericFailureError);
}

TEST(Objective, ConcavityProbe) {
    std::mt19937_64 eng(41);
    const ChannelSet c = generate_rayleigh(3, 3, 2, 4.0, 77);
    for (int rep = 0; rep < 20; ++rep) {
        const CovarianceSet qa = randomFeasibleCovariances(eng, c.K, c.nr, c.P);
        const CovarianceSet qb = randomFeasibleCovariances(eng, c.K, c.nr, c.P);
        const double fa = objective(qa, c);
        const double fb = objective(qb, c);
        for (double t : {0.25, 0.5, 0.75}) {
            CovarianceSet mix;
            for (std::size_t i = 0; i < qa.Q.size(); ++i)
                mix.Q.push_back(t * qa.Q[i] + (1.0 - t) * qb.Q[i]);
            EXPECT_GE(objective(mix, c), t * fa + (1.0 - t) * fb - 1e-9);
        }
    }
}

TEST(Gradients, IdentityChannelsAtZeroGiveTwoI) {
    ChannelSet c;
    c.K = 2;
    c.nt = 3;
    c.nr = 3;
    c.P = 1.0;
    c.H.push_back(CMatrix::Identity(3, 3));
    c.H.push_back(CMatrix::Identity(3, 3));
    const GradientSet g = gradients(zeroCov(c), c);
    for (const HermMatrix& gi : g.G)
        EXPECT_LT(frob_dist(gi, 2.0 * HermMatrix::identity(3)), 1e-12);
}

TEST(Gradients, ScalarValue) {
    const ChannelSet c = scalarChannel(1.0, 1.0);
    const GradientSet g = gradients(scalarCov(1.0), c);
    EXPECT_NEAR(g.G[0](0, 0).real(), 1.0, 1e-14);  // 2 * (1 / (1+1))
}

TEST(Gradients, MatchFiniteDifferences) {
    std::mt19937_64 eng(43);
    const ChannelSet c = generate_rayleigh(3, 3, 2, 4.0, 19);
    const CovarianceSet q = randomFeasibleCovariances(eng, c.K, c.nr, c.P);
    const double f = objective(q, c);
    const GradientSet g = gradients(q, c);
    for (int user = 0; user < c.K; ++user) {
        HermMatrix delta = randomHermitian(eng, c.nr);
        delta = (1.0 / delta.frobeniusNorm()) * delta;
        const double analytic = 0.5 * real_inner(g.G[static_cast<std::size_t>(user)], delta);
        for (double h : {1e-6, 1e-5}) {
            const double fd = oracles::fd_directional_derivative(q, c, user, delta, h);
            EXPECT_NEAR(fd, analytic, 1e-5 * std::max(1.0, std::abs(f)));
        }
    }
}

TEST(Gradients, ArePositiveSemidefinite) {
    std::mt19937_64 eng(47);
    const ChannelSet c = generate_rayleigh(4, 3, 3, 6.0, 23);
    const CovarianceSet q = randomFeasibleCovariances(eng, c.K, c.nr, c.P);
    for (const HermMatrix& gi : gradients(q, c).G) {
        const EigDecomp e = herm_eig(gi);
        EXPECT_GE(e.eigenvalues[e.eigenvalues.size() - 1],
                  -1e-9 * gi.frobeniusNorm());
    }
}

namespace {

GradientSet scalarGrad(double v) {
    Eigen::VectorXd d(1);
    d << v;
    GradientSet g;
    g.G.push_back(HermMatrix::diagonal(d));
    return g;
}

}  // namespace

TEST(Deflect, ResetReturnsPlainGradients) {
    const GradientSet cur = scalarGrad(3.0);
    const GradientSet out = deflect(cur, scalarGrad(7.0), scalarGrad(7.0), true);
    EXPECT_EQ(out.G[0](0, 0).real(), 3.0);
}

TEST(Deflect, UnitRatioAddsPreviousDirection) {
    // Same plain-gradient norms: rho = 1, so G = Ḡ + G_prev.
    const GradientSet out =
        deflect(scalarGrad(2.0), scalarGrad(5.0), scalarGrad(-2.0), false);
    EXPECT_DOUBLE_EQ(out.G[0](0, 0).real(), 7.0);
}

TEST(Deflect, HandComputedRatio) {
    // ‖Ḡ_k‖ = 2, ‖Ḡ_{k-1}‖ = 1, G_prev = Ḡ_{k-1}: rho = 4, G = Ḡ_k + 4 Ḡ_{k-1}.
    const GradientSet out =
        deflect(scalarGrad(2.0), scalarGrad(1.0), scalarGrad(1.0), false);
    EXPECT_DOUBLE_EQ(out.G[0](0, 0).real(), 6.0);
}

TEST(Deflect, AggregateUsesOneRatio) {
    GradientSet cur = scalarGrad(2.0);
    cur.G.push_back(scalarGrad(0.0).G[0]);
    GradientSet prevPlain = scalarGrad(1.0);
    prevPlain.G.push_back(scalarGrad(1.0).G[0]);
    GradientSet prevDefl = prevPlain;
    // rho = (4 + 0) / (1 + 1) = 2 for both users.
    const GradientSet out =
        deflect(cur, prevDefl, prevPlain, false, DeflectionMode::Aggregate);
    EXPECT_DOUBLE_EQ(out.G[0](0, 0).real(), 4.0);
    EXPECT_DOUBLE_EQ(out.G[1](0, 0).real(), 2.0);
}

TEST(Deflect, NoneModeIgnoresHistory) {
    const GradientSet out = deflect(scalarGrad(2.0), scalarGrad(9.0), scalarGrad(9.0),
                                    false, DeflectionMode::None);
    EXPECT_DOUBLE_EQ(out.G[0](0, 0).real(), 2.0);
}

TEST(Deflect, ZeroPreviousNormWithoutResetThrows) {
    EXPECT_THROW(deflect(scalarGrad(2.0), scalarGrad(0.0), scalarGrad(0.0), false),
                 DegenerateDeflectionError);
}
