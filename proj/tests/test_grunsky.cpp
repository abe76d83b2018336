#include "cornergas/conformal.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/grunsky.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornergas;

namespace {

double max_diag_error(const GrunskyMatrix& B, double c)
{
    double err = 0.0;
    for (int k = 1; k <= B.rows(); ++k)
        for (int l = 1; l <= B.cols(); ++l) err = std::max(err, std::abs(B.b(k, l) - (k == l ? std::pow(c, k) : 0.0)));
    return err;
}

}  // namespace

TEST(Grunsky, JoukowskiIsDiagonalUnderEveryEngine)
{
    const auto J = build_joukowski(0.5);
    EXPECT_LT(max_diag_error(grunsky_log_fft(J, 32), 0.5), 1e-10);
    EXPECT_LT(max_diag_error(grunsky_psi_contour(J, 32), 0.5), 1e-12);
    EXPECT_LT(max_diag_error(grunsky_power_series(J, 32), 0.5), 1e-15);
}

TEST(Grunsky, FftEnginesMatchPowerSeriesOnSquare)
{
    const auto g = build_sc_exterior(regular_polygon_corners(4), 512);
    const auto P = grunsky_power_series(g, 16);
    EngineOptions o;
    o.rows = o.cols = 16;
    EXPECT_LT((grunsky_log_fft(g, 16, o).entries - P.entries).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((grunsky_psi_contour(g, 16, o).entries - P.entries).cwiseAbs().maxCoeff(), 1e-11);
    // Fourfold symmetry: b_kl = 0 unless 4 divides k + l; b_22 = 2 g_3 = 1/3.
    EXPECT_EQ(std::abs(P.b(1, 2)), 0.0);
    EXPECT_NEAR(P.b(2, 2).real(), 1.0 / 3, 1e-15);
}

TEST(Grunsky, PsiMatchesPowerSeriesOnMixedTriangle)
{
    const auto g = build_sc_exterior(balanced_triangle_corners(0.1, 0.4, 0.5), 512);
    const auto P = grunsky_power_series(g, 12);
    EngineOptions o;
    o.rows = o.cols = 12;
    const auto B = grunsky_psi_contour(g, 12, o);
    EXPECT_LT((B.entries - P.entries).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(symmetry_residual(B), 1e-12);
}

TEST(Grunsky, RectangularBlockExtendsSquare)
{
    const auto g = build_sc_exterior(regular_polygon_corners(3), 2048);
    EngineOptions sq;
    sq.rows = sq.cols = 32;
    EngineOptions rect;
    rect.rows = 32;
    rect.cols = 128;
    const auto A = grunsky_psi_contour(g, 32, sq);
    const auto R = grunsky_psi_contour(g, 32, rect);
    ASSERT_EQ(R.rows(), 32);
    ASSERT_EQ(R.cols(), 128);
    EXPECT_LT((R.square(32) - A.entries).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Grunsky, SelfConsistencyAccuracyIsReported)
{
    const auto g = build_sc_exterior(regular_polygon_corners(4), 1024);
    EngineOptions o;
    o.rows = 64;
    o.cols = 128;
    const auto B = grunsky_psi_contour(g, 64, o);
    EXPECT_EQ(B.accuracy_source, "self-consistency");
    EXPECT_LT(B.accuracy, 1e-8);
    EXPECT_GT(B.grid.M1, 4 * 64 - 1);
}

TEST(Grunsky, CoincidentRadiiAreSeparated)
{
    // rows = cols / 2 makes both default radii equal; the engine must move one.
    const auto J = build_joukowski(0.3);
    EngineOptions o;
    o.rows = 16;
    o.cols = 32;
    const auto B = grunsky_psi_contour(J, 16, o);
    EXPECT_GT(std::abs(B.grid.r1 - B.grid.r2), 0.0);
    EXPECT_LT(max_diag_error(B, 0.3), 1e-12);
}

TEST(Grunsky, InteriorQuadraticMatchesBinomialFormula)
{
    const std::vector<cplx> coeffs{1.0, 0.2};
    const auto f = build_interior_polynomial(coeffs);
    const auto B = grunsky_interior(f, 16);
    const auto ref = interior_quadratic_reference(0.2, 16);
    // Roundoff is amplified by (r1 r2)^{-k} on the inner circles, about 1e-9 at k = l = 16.
    EXPECT_LT((B.entries - ref).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((B.entries - ref).topLeftCorner(4, 4).cwiseAbs().maxCoeff(), 1e-13);
    // Hand expansion of log(1 + c(zeta + z)): a_{-1,-1} = c^2.
    EXPECT_NEAR(B.b(1, 1).real(), 0.04, 1e-13);
    EXPECT_NEAR(B.b(1, 2).real(), -std::sqrt(2.0) * 0.008, 1e-13);
}

TEST(Grunsky, EquipotentialScaling)
{
    const auto J = build_joukowski(0.6);
    const double r = 1.2;
    const auto Br = scale_equipotential(grunsky_psi_contour(J, 24), r);
    const auto direct = grunsky_psi_contour(build_equipotential(J, r), 24);
    EXPECT_LT((Br.entries - direct.entries).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(max_diag_error(direct, 0.6 / (r * r)), 1e-12);
}

TEST(Grunsky, DvectorOfPolygonIsExact)
{
    // For straight edges d_k = sum_p beta_p z_p^k / k.
    const auto cs = balanced_triangle_corners(0.1, 0.4, 0.5);
    const auto g = build_sc_exterior(cs, 4096);
    const auto d = dvector(g, 64);
    for (int k = 1; k <= 64; ++k) {
        cplx xi{};
        for (const auto& c : cs) xi += c.beta() * std::pow(c.prevertex(), double(k)) / double(k);
        EXPECT_NEAR(std::abs(d.d(k - 1) - xi), 0.0, 1e-10) << k;
    }
}

TEST(Grunsky, DvectorRoutesAgree)
{
    const auto g = build_sc_exterior(balanced_triangle_corners(0.1, 0.4, 0.5), 1024);
    EngineOptions o;
    o.rows = o.cols = 48;
    const auto B = grunsky_psi_contour(g, 48, o);
    const auto da = dvector(B, 48);
    const auto db = dvector(g, 48);
    EXPECT_LT((da.d - db.d).cwiseAbs().maxCoeff(), 1e-10);
    const auto J = build_joukowski(0.4);
    const auto dj = dvector(J, 8);
    // log(1 - c z^{-2}) gives d_2 = c, d_4 = c^2 / 2.
    EXPECT_NEAR(std::abs(dj.d(1) - 0.4), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(dj.d(3) - 0.08), 0.0, 1e-13);
    EXPECT_THROW(dvector(scaled(J, 2.0), 8), InvalidArgument);
    EXPECT_NO_THROW(dvector(scaled(J, 2.0), 8, true));
}

TEST(Grunsky, RejectsBadInputs)
{
    const auto J = build_joukowski(0.5);
    EngineOptions o;
    o.oversample = 2;
    EXPECT_THROW(grunsky_log_fft(J, 16, o), InvalidArgument);
    EXPECT_THROW(grunsky_psi_contour(J, 0), InvalidArgument);
    // z + 3/z folds over itself on the sampling circles: the log kernel winds.
    ExteriorMapSeries folded;
    folded.coeffs = {0.0, 3.0};
    EXPECT_THROW(grunsky_log_fft(folded, 16), BranchError);
}
