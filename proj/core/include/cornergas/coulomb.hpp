#pragma once

#include "cornergas/conformal.hpp"
#include "cornergas/grunsky.hpp"

#include <Eigen/Dense>

#include <string>

namespace cornergas {

enum class Precision { Double, Extended };
enum class Route { Direct, Grunsky };

/// Gram matrix of monomials over a domain, reduced to boundary integrals.
/// Interior: M_kl = int_D z^{k-1} conj(z)^{l-1} d^2z.
/// Exterior: M_kl = int_{D*} z^{-k-1} conj(z)^{-l-1} d^2z.
struct MomentMatrix {
    int n = 0;
    Eigen::MatrixXcd entries;
    std::string rule;           ///< "trapezoid" or "gauss-legendre-30"
    int resolution = 0;         ///< trapezoid nodes or panels per edge
    double error = 0.0;         ///< max change of M_kl / sqrt(M_kk M_ll) at the last doubling
    double hermitian_residual = 0.0;  ///< before symmetrization
    Precision precision = Precision::Double;
    bool positive_definite = false;
    double logdet = 0.0;        ///< log det, computed in `precision`
};

/// Standard-precision cap on n for the direct route; Extended raises it.
int direct_route_cap(Precision p);

MomentMatrix moments_interior(const ExteriorMapSeries& map, int n, Precision p = Precision::Double);
MomentMatrix moments_interior(const InteriorMapSeries& f, int n, Precision p = Precision::Double);
MomentMatrix moments_exterior(const InteriorMapSeries& f, int n, Precision p = Precision::Double);

/// log(pi^n / n!), the disk value.
double log_Z_disk(int n);

double logZ_interior_grunsky(const GrunskyMatrix& B, int n);
double logZ_exterior_grunsky(const GrunskyMatrix& B1, int n);

/// Throws NumericalError when the moment matrix loses positive definiteness.
double logZ_interior(const ExteriorMapSeries& map, int n, Route route, Precision p = Precision::Double);
double logZ_exterior(const InteriorMapSeries& f, int n, Route route, Precision p = Precision::Double);

/// log(Zbar_n(D) / Zbar_n(disk)) = log det(I - P_n B B^* P_n).
double normalized_ratio(const GrunskyMatrix& B, int n);

/// Grunsky matrix used by the Grunsky route: n rows and enough columns for
/// the inner sum of B B^*.
GrunskyMatrix grunsky_for_partition(const ExteriorMapSeries& map, int n);

}  // namespace cornergas
