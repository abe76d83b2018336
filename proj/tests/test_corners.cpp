#include "cornergas/conformal.hpp"
#include "cornergas/corners.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/grunsky.hpp"
#include "cornergas/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornergas;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Corners, HhatClosedFormMatchesTransform)
{
    for (double gamma : {1.1, 1.5, 1.8})
        for (double xi : {0.0, 0.5, 1.5, 4.0})
            EXPECT_NEAR(Hp_hat(xi, gamma), Hp_hat_numeric(xi, gamma), 1e-10) << gamma << ' ' << xi;
    EXPECT_NEAR(Hp_hat(0.0, 1.5), 0.5, 1e-15);
    // Large xi: exponential decay, no overflow.
    EXPECT_TRUE(std::isfinite(Hp_hat(400.0, 1.5)));
    EXPECT_LT(std::abs(Hp_hat(400.0, 1.5)), 1e-100);
    EXPECT_EQ(Hp_hat(2.0, 1.0), 0.0);
}

TEST(Corners, FinalIntegralClosedForm)
{
    for (int j = -9; j <= 9; ++j) {
        if (j == 0) continue;
        const auto f = finalintegral(0.1 * j);
        EXPECT_NEAR(f.quadrature, f.closed_form, 1e-11) << j;
    }
    EXPECT_THROW(finalintegral(1.0), InvalidArgument);
}

TEST(Corners, AnomalyEqualsCornerCoefficient)
{
    // gamma beta^2 / (6 (1 - beta^2)) with beta = 1 - gamma is (alpha - 1)^2 / (6 alpha).
    for (const auto& cs : {regular_polygon_corners(3), regular_polygon_corners(4),
                           balanced_triangle_corners(0.1, 0.4, 0.5)})
        EXPECT_NEAR(corner_anomaly_quadrature(cs), corner_sum(cs, AngleMode::Interior) / 6.0, 1e-11);
}

TEST(Corners, CornerSums)
{
    const auto sq = regular_polygon_corners(4);
    EXPECT_NEAR(corner_sum(sq, AngleMode::Interior), 2.0, 1e-15);
    EXPECT_NEAR(corner_sum(sq, AngleMode::Exterior), 2.0 / 3.0, 1e-15);
    const std::vector<double> mixed{0.1, 0.4, 0.5};
    EXPECT_NEAR(corner_sum(mixed), 9.5, 1e-13);
}

TEST(Corners, KernelSymmetryAndScaling)
{
    EXPECT_NEAR(kernel_Kp(3.0, 7.0, 1.5), kernel_Kp(7.0, 3.0, 1.5), 1e-16);
    // Homogeneous of degree -1.
    EXPECT_NEAR(kernel_Kp(6.0, 14.0, 1.5), 0.5 * kernel_Kp(3.0, 7.0, 1.5), 1e-16);
    EXPECT_EQ(kernel_Kp(3.0, 7.0, 1.0), 0.0);
    EXPECT_THROW(kernel_Kp(0.0, 1.0, 1.5), InvalidArgument);
    // Closed form on the diagonal: H_p(0) = gamma sin(pi gamma) / (2 pi (cos(pi gamma) - 1)).
    const double g = 1.5;
    EXPECT_NEAR(kernel_Kp(5.0, 5.0, g), g * std::sin(kPi * g) / (2 * kPi * (std::cos(kPi * g) - 1.0)) / 5.0, 1e-15);
}

TEST(Corners, TraceConstantByIndependentQuadrature)
{
    for (double gamma : {1.25, 1.5, 1.75})
        for (int i : {1, 2, 3}) {
            const auto ref = quad::integrate([&](double x) { return std::pow(Hp_hat(x, gamma), 2 * i); }, 0.0, 60.0);
            EXPECT_NEAR(trace_constant(i, gamma), ref.value / kPi, 1e-11) << gamma << ' ' << i;
        }
}

TEST(Corners, KernelTraceResidualIsBounded)
{
    const std::vector<int> ns{64, 128, 256, 512};
    for (int i : {1, 2}) {
        const auto r = kernel_trace_residual(1.5, ns, i, 2048);
        for (double x : r) EXPECT_LT(std::abs(x), 0.05) << i;
        EXPECT_LT(std::abs(r.back() - r[2]), 0.01);
    }
}

TEST(Corners, SquareGrunskyApproachesKernel)
{
    const auto cs = regular_polygon_corners(4);
    const auto g = build_sc_exterior(cs, 1280);
    EngineOptions o;
    o.rows = 256;
    o.cols = 1024;
    const auto B = grunsky_psi_contour(g, 256, o);
    const auto rep = residual_bklAs(B, cs, {{8, 8}, {32, 32}, {128, 128}, {16, 48}});
    EXPECT_EQ(rep.rho, 1.0);
    EXPECT_FALSE(rep.any_accuracy_limited);
    EXPECT_LT(rep.entries[2].residual, rep.entries[1].residual);
    EXPECT_LT(rep.sup_ratio, 1.0);
    EXPECT_TRUE(std::isfinite(rep.sup_f_rho_ratio));
    const auto rows = trace_compare(B, cs, {32, 64, 128, 256}, 2);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) EXPECT_LT(r.difference, 0.3);
    EXPECT_THROW(residual_bklAs(B, {}, {{1, 1}}), InvalidArgument);
}

TEST(Corners, SlopeFits)
{
    std::vector<double> xs, ys;
    for (int j = 0; j < 6; ++j) {
        xs.push_back(j);
        ys.push_back(0.75 * j + 2.0 + std::exp(-double(j)));
    }
    const auto sd = fit_log_slope(xs, ys, FitMethod::SuccessiveDifferences);
    EXPECT_NEAR(sd.slope, 0.75 + std::exp(-5.0) - std::exp(-4.0), 1e-14);
    EXPECT_EQ(sd.successive.size(), 5u);
    std::vector<double> line(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) line[j] = -1.5 * xs[j] + 0.25;
    const auto ls = fit_log_slope(xs, line, FitMethod::LeastSquares);
    EXPECT_NEAR(ls.slope, -1.5, 1e-14);
    EXPECT_NEAR(ls.intercept, 0.25, 1e-14);
    EXPECT_NEAR(ls.stderr_slope, 0.0, 1e-12);
    EXPECT_THROW(fit_log_slope({0, 1, 2}, {0, 1, 2}, FitMethod::LeastSquares), InvalidArgument);
    EXPECT_THROW(fit_log_slope({0, 1, 1, 2}, {0, 1, 2, 3}, FitMethod::LeastSquares), InvalidArgument);
}

TEST(Corners, FRho)
{
    EXPECT_NEAR(f_rho(2.0, 2.0, 1.0), 2.0 / 8.0 * std::sqrt(1.0) * 1.0, 1e-15);
    EXPECT_NEAR(f_rho(1.0, 4.0, 0.5), 1.0 / std::sqrt(17.0), 1e-15);
}

TEST(Corners, DvectorOfEquipotentialIsXi)
{
    const auto cs = regular_polygon_corners(4);
    const auto g = build_sc_exterior(cs, 4096);
    const double r = 1.05;
    auto d = dvector(g, 128);
    for (int k = 1; k <= 128; ++k) d.d(k - 1) *= std::pow(r, -k);
    const auto chk = xi_approx_check(d, cs, r);
    EXPECT_LT(chk.sup, 1e-8);
}
