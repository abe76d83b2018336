#include "cornergas/conformal.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornergas;

namespace {

constexpr double kPi = std::numbers::pi;

// Capacity of the unit-side square, Gamma(1/4)^2 / (4 pi^{3/2}).
const double kSquareCapacity = std::pow(std::tgamma(0.25), 2) / (4.0 * std::pow(kPi, 1.5));

}  // namespace

TEST(Conformal, DiskIsIdentity)
{
    const auto d = build_disk();
    const cplx z{0.3, 1.4};
    EXPECT_NEAR(std::abs(d.eval(z) - z), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d.derivative(z) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(d.capacity(), 1.0);
}

TEST(Conformal, JoukowskiClosedForm)
{
    const auto j = build_joukowski(0.4);
    const cplx z = std::polar(1.3, 0.7);
    EXPECT_NEAR(std::abs(j.eval(z) - (z + 0.4 / z)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(j.derivative(z) - (1.0 - 0.4 / (z * z))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(j.second_derivative(z) - 0.8 / (z * z * z)), 0.0, 1e-14);
    EXPECT_THROW(build_joukowski(1.0), InvalidArgument);
    EXPECT_THROW(build_joukowski(-0.1), InvalidArgument);
}

TEST(Conformal, SquareLeadingCoefficients)
{
    // g' = (1 - z^{-4})^{1/2}: g_3 = 1/6, g_7 = 1/56, all others zero.
    const auto g = build_sc_exterior(regular_polygon_corners(4), 64);
    EXPECT_NEAR(std::abs(g.coeffs[3] - 1.0 / 6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.coeffs[7] - 1.0 / 56), 0.0, 1e-15);
    for (int k : {1, 2, 4, 5, 6}) EXPECT_EQ(std::abs(g.coeffs[k]), 0.0) << k;
    EXPECT_EQ(g.tail_model, TailModel::PowerLaw);
}

TEST(Conformal, TriangleLeadingCoefficient)
{
    // g' = (1 - z^{-3})^{2/3}: g_2 = 1/3.
    const auto g = build_sc_exterior(regular_polygon_corners(3), 32);
    EXPECT_NEAR(std::abs(g.coeffs[2] - 1.0 / 3), 0.0, 1e-15);
}

TEST(Conformal, SquareVerticesHaveCapacitySide)
{
    const auto g = build_sc_exterior(regular_polygon_corners(4), 256);
    const auto w = polygon_vertices(g);
    ASSERT_EQ(w.size(), 4u);
    const double side = 1.0 / kSquareCapacity;
    for (int p = 0; p < 4; ++p) {
        EXPECT_NEAR(std::abs(w[(p + 1) % 4] - w[p]), side, 1e-10);
        EXPECT_NEAR(std::arg(w[p]), std::remainder(p * kPi / 2, 2 * kPi), 1e-10);
    }
}

TEST(Conformal, MixedTriangleAnglesAndClosure)
{
    const auto cs = balanced_triangle_corners(0.1, 0.4, 0.5);
    cplx residue{};
    for (const auto& c : cs) residue += c.beta() * c.prevertex();
    EXPECT_LT(std::abs(residue), 1e-14);
    const auto g = build_sc_exterior(cs, 512);
    const auto w = polygon_vertices(g);
    // Interior angle at vertex p from the two incident edges.
    for (int p = 0; p < 3; ++p) {
        const cplx a = w[(p + 2) % 3] - w[p], b = w[(p + 1) % 3] - w[p];
        const double angle = std::abs(std::arg(a / b));
        EXPECT_NEAR(angle / kPi, cs[p].alpha, 1e-9) << p;
    }
}

TEST(Conformal, ResidueConditionIsEnforced)
{
    // Cube-root prevertices with unequal exponents leave a 1/z term in g'.
    std::vector<CornerSpec> bad{CornerSpec::make(0.0, 0.1), CornerSpec::make(2 * kPi / 3, 0.4),
                                CornerSpec::make(4 * kPi / 3, 0.5)};
    EXPECT_THROW(build_sc_exterior(bad, 64), InvalidArgument);
    std::vector<CornerSpec> open{CornerSpec::make(0.0, 0.5), CornerSpec::make(2.0, 0.5), CornerSpec::make(4.0, 0.5)};
    EXPECT_THROW(build_sc_exterior(open, 64), InvalidArgument);
    EXPECT_THROW(CornerSpec::make(0.0, 2.5), InvalidArgument);
}

TEST(Conformal, EquipotentialOfJoukowski)
{
    const auto g = build_equipotential(build_joukowski(0.5), 1.25);
    EXPECT_NEAR(std::abs(g.coeffs[1] - 0.5 / (1.25 * 1.25)), 0.0, 1e-15);
    EXPECT_TRUE(g.corners.empty());
    EXPECT_THROW(build_equipotential(g, 1.0), InvalidArgument);
}

TEST(Conformal, EquipotentialMatchesDefinition)
{
    const auto g = build_sc_exterior(regular_polygon_corners(4), 4096);
    const double r = 1.1;
    const auto gr = build_equipotential(g, r);
    for (double t : {0.1, 0.9, 2.0}) {
        const cplx z = std::polar(1.0, t);
        EXPECT_NEAR(std::abs(gr.eval(z) - g.eval(r * z) / r), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(gr.derivative(z) - g.sc->derivative(r * z)), 0.0, 1e-12);
    }
}

TEST(Conformal, SimilarityTransforms)
{
    const auto j = build_joukowski(0.3);
    const auto s = scaled(j, 2.0);
    EXPECT_EQ(s.capacity(), 2.0);
    const cplx z = std::polar(1.2, 0.4);
    EXPECT_NEAR(std::abs(s.eval(z) - 2.0 * j.eval(z)), 0.0, 1e-14);
    const double phi = 0.7;
    const auto r = rotated(j, phi);
    const cplx e = std::polar(1.0, phi);
    EXPECT_NEAR(std::abs(r.eval(z) - e * j.eval(z / e)), 0.0, 1e-14);
    const auto t = translated(j, {1.0, -2.0});
    EXPECT_NEAR(std::abs(t.eval(z) - j.eval(z) - cplx(1.0, -2.0)), 0.0, 1e-14);
    EXPECT_NEAR(normalized(s).capacity(), 1.0, 1e-15);
}

TEST(Conformal, FftSamplingMatchesHorner)
{
    const auto g = build_sc_exterior(balanced_triangle_corners(0.1, 0.4, 0.5), 300);
    const int M = 128;
    std::vector<cplx> w(M), dw(M);
    g.sample_circle(1.05, M, w.data(), dw.data());
    for (int j = 0; j < M; j += 17) {
        const cplx z = std::polar(1.05, 2 * kPi * j / M);
        EXPECT_NEAR(std::abs(w[j] - g.eval(z)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(dw[j] - g.derivative(z)), 0.0, 1e-12);
    }
}

TEST(Conformal, BoundaryDumpIsJordan)
{
    const auto g = build_sc_exterior(regular_polygon_corners(5), 1024);
    const auto s = eval_boundary_uniform(g, 2048);
    EXPECT_GT(s.radius, 1.0);
    EXPECT_TRUE(geometry::is_simple_closed(s.w));
    EXPECT_GT(geometry::signed_area(s.w), 0.0);
}

TEST(Conformal, InteriorPolynomialUnivalence)
{
    const std::vector<cplx> ok{1.0, 0.2};
    const auto f = build_interior_polynomial(ok);
    EXPECT_NEAR(f.univalence_margin, 0.6, 1e-6);
    const std::vector<cplx> looped{1.0, 0.6};
    EXPECT_THROW(build_interior_polynomial(looped), NotSimpleCurve);
    const std::vector<cplx> neg{-1.0, 0.1};
    EXPECT_THROW(build_interior_polynomial(neg), InvalidArgument);
}

TEST(Conformal, TailBoundModels)
{
    std::vector<cplx> geo(64), pw(64);
    for (int k = 0; k < 64; ++k) {
        geo[k] = std::pow(0.8, k);
        pw[k] = k ? std::pow(double(k), -2.5) : 0.0;
    }
    // sum_{k>63} 0.8^k = 5 * 0.8^64
    EXPECT_NEAR(estimate_tail_bound(geo, TailModel::Geometric, 1.0) / (5.0 * std::pow(0.8, 64)), 1.0, 0.05);
    const double pw_tail = estimate_tail_bound(pw, TailModel::PowerLaw, 1.0);
    EXPECT_GT(pw_tail, 0.0);
    EXPECT_LT(pw_tail, 1e-2);
}
