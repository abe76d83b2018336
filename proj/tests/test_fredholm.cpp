#include "cornergas/conformal.hpp"
#include "cornergas/errors.hpp"
#include "cornergas/fredholm.hpp"
#include "cornergas/grunsky.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cornergas;

namespace {

double joukowski_IF(double c)
{
    double s = 0.0;
    for (int j = 1; j < 400; ++j) s += 4.0 * std::pow(c, 2 * j) / (j * (1.0 + std::pow(c, 2 * j)));
    return s;
}

GrunskyMatrix small_square(int rows, int cols)
{
    const auto g = build_sc_exterior(regular_polygon_corners(4), rows + cols);
    EngineOptions o;
    o.rows = rows;
    o.cols = cols;
    return grunsky_psi_contour(g, rows, o);
}

}  // namespace

TEST(Fredholm, JoukowskiLogdetClosedForm)
{
    const auto B = grunsky_psi_contour(build_joukowski(0.5), 64);
    double ref = 0.0;
    for (int k = 1; k <= 20; ++k) ref += std::log1p(-std::pow(0.25, k));
    EXPECT_NEAR(logdet_truncated(B, 20), ref, 1e-13);
    double full = 0.0;
    for (int k = 1; k <= 64; ++k) full += std::log1p(-std::pow(0.25, k));
    const auto I = loewner_energy(B);
    EXPECT_NEAR(I.value, -12.0 * full, 1e-12);
    EXPECT_TRUE(I.converged);
}

TEST(Fredholm, CholeskyAgreesWithSvd)
{
    const auto B = small_square(64, 64);
    for (int n : {1, 7, 32, 64}) EXPECT_NEAR(logdet_truncated(B, n), logdet_svd(B, n), 1e-11) << n;
}

TEST(Fredholm, SequenceMatchesIndividualCalls)
{
    const auto B = small_square(64, 256);
    const std::vector<int> ns{64, 8, 32};
    const auto seq = logdet_sequence(B, ns);
    for (std::size_t i = 0; i < ns.size(); ++i) EXPECT_NEAR(seq[i], logdet_truncated(B, ns[i]), 1e-12);
}

TEST(Fredholm, LogdetIsNonIncreasing)
{
    const auto B = small_square(128, 512);
    std::vector<int> ns(128);
    for (int n = 1; n <= 128; ++n) ns[n - 1] = n;
    const auto seq = logdet_sequence(B, ns);
    EXPECT_LE(seq.front(), 0.0);
    for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_LE(seq[i], seq[i - 1] + 1e-14) << i;
}

TEST(Fredholm, TracePowerSeriesReproducesLogdet)
{
    const auto B = small_square(32, 128);
    const auto tr = trace_powers(B, 32, 40);
    EXPECT_LT(operator_norm(B, 32, true), std::sqrt(0.8));
    double s = 0.0;
    for (int i = 1; i <= 40; ++i) s -= tr[i - 1] / i;
    EXPECT_NEAR(s, logdet_truncated(B, 32), 1e-8);
}

TEST(Fredholm, OperatorNormBelowOne)
{
    const auto B = small_square(64, 256);
    const double sq = operator_norm(B, 64), all = operator_norm(B, 64, true);
    EXPECT_LT(sq, 1.0);
    EXPECT_LT(all, 1.0);
    EXPECT_GE(all, sq - 1e-14);
}

TEST(Fredholm, PommerenkeEnergyOfJoukowski)
{
    for (double c : {0.3, 0.5, 0.7}) {
        const auto J = build_joukowski(c);
        const auto B = grunsky_psi_contour(J, 96);
        const auto d = dvector(J, 96);
        EXPECT_NEAR(pommerenke_energy_value(B, d, 96), joukowski_IF(c), 1e-10) << c;
        EXPECT_NEAR(pommerenke_energy_real_block(B, d, 96), joukowski_IF(c), 1e-10) << c;
    }
}

TEST(Fredholm, RealBlockFormMatchesComplexForm)
{
    const auto g = build_sc_exterior(balanced_triangle_corners(0.1, 0.4, 0.5), 1024);
    EngineOptions o;
    o.rows = o.cols = 64;
    const auto B = grunsky_psi_contour(g, 64, o);
    const auto d = dvector(g, 64);
    for (int n : {8, 32, 64})
        EXPECT_NEAR(pommerenke_energy_value(B, d, n), pommerenke_energy_real_block(B, d, n), 1e-9) << n;
}

TEST(Fredholm, EquipotentialEnergiesOfJoukowski)
{
    const double c = 0.5, r = 1.3;
    const auto J = build_joukowski(c);
    const auto B = grunsky_psi_contour(J, 64);
    const auto d = dvector(J, 64);
    const auto E = equipotential_energies(B, d, r, 64);
    double IL = 0.0;
    const double cr = c / (r * r);
    for (int k = 1; k <= 64; ++k) IL -= 12.0 * std::log1p(-std::pow(cr, 2 * k));
    EXPECT_NEAR(E.loewner, IL, 1e-12);
    EXPECT_NEAR(E.pommerenke, joukowski_IF(cr), 1e-12);
    EXPECT_THROW(equipotential_energies(B, d, 1.0, 16), InvalidArgument);
}

TEST(Fredholm, ViolatedGrunskyInequalityIsReported)
{
    GrunskyMatrix bad;
    bad.entries = Eigen::MatrixXcd::Identity(4, 4) * 1.01;
    EXPECT_THROW(logdet_truncated(bad, 4), NumericalError);
    EXPECT_THROW(logdet_truncated(bad, 5), InvalidArgument);
}
