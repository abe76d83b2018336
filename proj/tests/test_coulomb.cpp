#include "cornergas/conformal.hpp"
#include "cornergas/coulomb.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/grunsky.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornergas;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(a); }

}  // namespace

TEST(Coulomb, DiskConstant)
{
    EXPECT_NEAR(log_Z_disk(1), std::log(std::numbers::pi), 1e-15);
    EXPECT_NEAR(log_Z_disk(3), 3 * std::log(std::numbers::pi) - std::log(6.0), 1e-14);
    for (int n : {1, 4, 10}) {
        const auto M = moments_interior(build_disk(), n);
        EXPECT_TRUE(M.positive_definite);
        EXPECT_NEAR(M.logdet, log_Z_disk(n), 1e-11);
        for (int k = 0; k < n; ++k) EXPECT_NEAR(M.entries(k, k).real(), std::numbers::pi / (k + 1), 1e-12);
    }
}

TEST(Coulomb, MomentMatrixStructure)
{
    const auto M = moments_interior(build_joukowski(0.5), 8);
    EXPECT_EQ(M.rule, "trapezoid");
    EXPECT_LT(M.hermitian_residual, 1e-12);
    EXPECT_LT(M.error, 1e-12);
    EXPECT_LT((M.entries - M.entries.adjoint()).norm(), 1e-15);
    EXPECT_TRUE(M.positive_definite);

    const auto S = moments_interior(build_sc_exterior(regular_polygon_corners(4), 1024), 6);
    EXPECT_EQ(S.rule, "gauss-legendre-30");
    EXPECT_TRUE(S.positive_definite);
    EXPECT_LT(S.hermitian_residual, 1e-10);
}

TEST(Coulomb, InteriorRoutesAgree)
{
    const auto jk = build_joukowski(0.5);
    for (int n : {1, 2, 5, 10, 16}) {
        const double direct = logZ_interior(jk, n, Route::Direct);
        const double gr = logZ_interior(jk, n, Route::Grunsky);
        EXPECT_LT(rel(direct, gr), 1e-8) << n;
    }
    const auto sq = build_sc_exterior(regular_polygon_corners(4), 4096);
    for (int n : {1, 4, 8}) {
        const double direct = logZ_interior(sq, n, Route::Direct);
        const double gr = logZ_interior(sq, n, Route::Grunsky);
        EXPECT_LT(rel(direct, gr), 1e-6) << n;
    }
}

TEST(Coulomb, ExteriorRoutesAgree)
{
    const std::vector<cplx> coeffs{1.0, 0.2};
    const auto f = build_interior_polynomial(coeffs);
    for (int n : {1, 3, 6, 12}) {
        const double direct = logZ_exterior(f, n, Route::Direct);
        const double gr = logZ_exterior(f, n, Route::Grunsky);
        EXPECT_LT(rel(direct, gr), 1e-9) << n;
    }
}

TEST(Coulomb, ScalingOfPartitionFunction)
{
    // Z_n(lambda D) = lambda^{n(n+1)} Z_n(D).
    const auto jk = build_joukowski(0.4);
    const double lam = 1.7;
    const int n = 6;
    const double a = logZ_interior(jk, n, Route::Direct);
    const double b = logZ_interior(scaled(jk, lam), n, Route::Direct);
    EXPECT_NEAR(b - a, n * (n + 1.0) * std::log(lam), 1e-9);
}

TEST(Coulomb, NormalizedRatioIsNonPositive)
{
    const auto B = grunsky_for_partition(build_joukowski(0.5), 12);
    double prev = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const double r = normalized_ratio(B, n);
        EXPECT_LE(r, prev + 1e-14);
        prev = r;
    }
}

TEST(Coulomb, ExtendedPrecision)
{
    EXPECT_GT(direct_route_cap(Precision::Extended), direct_route_cap(Precision::Double));
    const auto jk = build_joukowski(0.3);
    const auto d = moments_interior(jk, 10, Precision::Double);
    const auto e = moments_interior(jk, 10, Precision::Extended);
    EXPECT_EQ(e.precision, Precision::Extended);
    EXPECT_NEAR(d.logdet, e.logdet, 1e-9);
}

TEST(Coulomb, BadInputs)
{
    EXPECT_THROW(moments_interior(build_disk(), 0), InvalidArgument);
    EXPECT_THROW(moments_interior(build_disk(), direct_route_cap(Precision::Double) + 1), InvalidArgument);
}

TEST(Coulomb, IllConditionedMomentsStopAtRoundingFloor)
{
    // The moment matrix of this ellipse is badly conditioned at n = 32; the
    // quadrature must still terminate and agree with the Grunsky route.
    const auto jk = build_joukowski(0.5);
    const auto d = moments_interior(jk, 24, Precision::Double);
    EXPECT_TRUE(d.positive_definite);
    EXPECT_LT(rel(d.logdet, logZ_interior(jk, 24, Route::Grunsky)), 1e-6);
    const auto e = moments_interior(jk, 32, Precision::Extended);
    EXPECT_TRUE(e.positive_definite);
    EXPECT_LT(rel(e.logdet, logZ_interior(jk, 32, Route::Grunsky)), 1e-6);
}
