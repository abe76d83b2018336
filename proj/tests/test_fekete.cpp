#include "cornergas/conformal.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/fekete.hpp"
#include "cornergas/fredholm.hpp"
#include "cornergas/grunsky.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornergas;

namespace {

constexpr double kPi = std::numbers::pi;

// 4 sum c^{2j} / (j (1 + c^{2j})) for the ellipse with exterior map z + c/z.
double joukowski_IF(double c)
{
    double s = 0.0;
    for (int j = 1; j < 200; ++j) {
        const double q = std::pow(c, 2 * j);
        s += q / (j * (1.0 + q));
    }
    return 4.0 * s;
}

}  // namespace

TEST(Fekete, GradientMatchesFiniteDifferences)
{
    const BoundaryCurve curve(build_joukowski(0.4));
    std::vector<double> th{0.1, 0.9, 2.0, 3.1, 4.4, 5.5};
    const auto obj = fekete_objective(curve, th);
    const double h = 1e-6;
    for (std::size_t k = 0; k < th.size(); ++k) {
        auto p = th, m = th;
        p[k] += h;
        m[k] -= h;
        const double fd = (fekete_objective(curve, p).value - fekete_objective(curve, m).value) / (2 * h);
        EXPECT_NEAR(obj.gradient[k], fd, 1e-7) << k;
    }
}

TEST(Fekete, CircleIsEquispaced)
{
    for (int n : {2, 3, 7, 16}) {
        const auto s = fekete_optimize(build_disk(), n);
        EXPECT_NEAR(s.value, n * std::log(double(n)), 1e-9) << n;
        EXPECT_LE(s.grad_norm, 1e-10);
        for (int k = 1; k < n; ++k) EXPECT_NEAR(s.thetas[k] - s.thetas[k - 1], 2 * kPi / n, 1e-7);
    }
}

TEST(Fekete, DeterministicAcrossRuns)
{
    const auto a = fekete_optimize(build_joukowski(0.3), 12);
    const auto b = fekete_optimize(build_joukowski(0.3), 12);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.thetas, b.thetas);
}

TEST(Fekete, EllipseAsymptotics)
{
    const double c = 0.3;
    const auto map = build_joukowski(c);
    std::vector<FeketeSolution> sols;
    for (int n : {16, 32}) sols.push_back(fekete_optimize(map, n));
    const double IF = joukowski_IF(c);
    const auto chk = verify_pommerenke(map, IF, sols);
    ASSERT_EQ(chk.residuals.size(), 2u);
    EXPECT_LT(std::abs(chk.residuals[1]), std::abs(chk.residuals[0]));
    EXPECT_LT(std::abs(chk.residuals[1]), 0.05 * IF / 8 + 1e-3);

    const auto est = transfinite_diameter_estimate(sols);
    EXPECT_TRUE(est.decreasing);
    for (double r : est.circle_ratio) EXPECT_NEAR(r, 1.0, 0.02);
}

TEST(Fekete, EnergyFromGrunskyDataMatchesClosedForm)
{
    const double c = 0.3;
    const auto map = build_joukowski(c);
    const auto B = grunsky_psi_contour(map, 48);
    const auto d = dvector(map, 48);
    EXPECT_NEAR(pommerenke_energy_value(B, d, 48), joukowski_IF(c), 1e-10);
    EXPECT_NEAR(joukowski_IF(c), 0.347387069180, 1e-11);
}

TEST(Fekete, BadInputs)
{
    EXPECT_THROW(fekete_optimize(build_disk(), 1), InvalidArgument);
    FeketeOptions o;
    o.restarts = 0;
    EXPECT_THROW(fekete_optimize(build_disk(), 4, o), InvalidArgument);
    EXPECT_THROW(BoundaryCurve(build_sc_exterior(regular_polygon_corners(4), 256)), InvalidArgument);
    EXPECT_THROW(verify_pommerenke(build_disk(), std::nan(""), {}), InvalidArgument);
}
