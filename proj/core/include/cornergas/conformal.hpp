#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cornergas {

using cplx = std::complex<double>;

/// A corner of a piecewise-analytic boundary: prevertex z_p = e^{i theta} on
/// the unit circle, interior opening pi*alpha, exterior opening pi*gamma.
struct CornerSpec {
    double theta = 0.0;
    double alpha = 1.0;
    double gamma = 1.0;  ///< always 2 - alpha

    static CornerSpec make(double theta, double alpha);
    cplx prevertex() const { return std::polar(1.0, theta); }
    double beta() const { return 1.0 - alpha; }
};

/// min(1, gamma_1, ..., gamma_m); 1 for an empty list.
double corner_rho(std::span<const CornerSpec> corners);

/// Regular m-gon: alpha = (m-2)/m at theta_p = 2 pi p / m.
std::vector<CornerSpec> regular_polygon_corners(int m);

/// Triangle with the given interior angle fractions, with prevertices placed
/// so that sum beta_p z_p = 0 (needed for g to be single valued). z_1 = 1.
std::vector<CornerSpec> balanced_triangle_corners(double alpha1, double alpha2, double alpha3);

enum class TailModel { Exact, Geometric, PowerLaw };

/// Closed form of g' for Schwarz-Christoffel families:
/// g'(z) = amplitude * prod_p (1 - z_p / (radial_scale * z))^{beta_p}.
struct ScFactor {
    std::vector<cplx> prevertices;
    std::vector<double> betas;
    cplx amplitude{1.0, 0.0};
    double radial_scale = 1.0;

    cplx derivative(cplx z) const;
};

/// g(z) = r_inf z + sum_{k=0}^{T} g_k z^{-k}, the exterior map of the unit
/// disk complement onto the complement of a Jordan domain.
struct ExteriorMapSeries {
    double r_inf = 1.0;
    std::vector<cplx> coeffs{cplx{}};  ///< g_0..g_T
    std::vector<CornerSpec> corners;
    std::string family_tag;
    TailModel tail_model = TailModel::Exact;
    double tail_bound = 0.0;  ///< truncation error bound on |z| = 1 + boundary_epsilon()
    std::optional<ScFactor> sc;

    int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
    double capacity() const { return r_inf; }
    /// Radius offset used when the series must be evaluated near the boundary.
    double boundary_epsilon() const;

    cplx eval(cplx z) const;
    cplx derivative(cplx z) const;
    cplx second_derivative(cplx z) const;

    /// g and g' at rho e^{2 pi i j / M}, j = 0..M-1, by FFT (coefficients
    /// beyond M are folded, which is exact). Either output may be null.
    void sample_circle(double rho, int M, cplx* g, cplx* dg) const;
};

/// f(z) = sum_{k=1}^{M} f_k z^k with f_1 = r_0 > 0. coeffs[k-1] = f_k.
struct InteriorMapSeries {
    double r_0 = 1.0;
    std::vector<cplx> coeffs{cplx{1.0, 0.0}};
    double univalence_margin = 1.0;  ///< min |f'| on the unit circle divided by f_1

    cplx eval(cplx z) const;
    cplx derivative(cplx z) const;
    cplx second_derivative(cplx z) const;
};

struct BoundarySample {
    std::vector<double> theta;
    std::vector<cplx> w;   ///< boundary point
    std::vector<cplx> dw;  ///< dw/dtheta
    double radius = 1.0;   ///< radius actually used for the evaluation
};

ExteriorMapSeries build_disk();
ExteriorMapSeries build_joukowski(double c);
/// Exterior Schwarz-Christoffel map with r_inf = 1, truncated at N terms.
ExteriorMapSeries build_sc_exterior(std::span<const CornerSpec> corners, int N);
/// g_r(z) = g(rz)/r.
ExteriorMapSeries build_equipotential(const ExteriorMapSeries& map, double r);
InteriorMapSeries build_interior_polynomial(std::span<const cplx> coeffs);

/// Similarity images of a normalized map.
ExteriorMapSeries scaled(const ExteriorMapSeries& map, double lambda);
ExteriorMapSeries translated(const ExteriorMapSeries& map, cplx shift);
/// Normalized map of e^{i phi} D: z -> e^{i phi} g(e^{-i phi} z).
ExteriorMapSeries rotated(const ExteriorMapSeries& map, double phi);
/// Same map with capacity divided out (r_inf = 1).
ExteriorMapSeries normalized(const ExteriorMapSeries& map);

BoundarySample eval_boundary(const ExteriorMapSeries& map, std::span<const double> thetas);
BoundarySample eval_boundary(const InteriorMapSeries& map, std::span<const double> thetas);
/// Equispaced grid of M angles, evaluated by FFT.
BoundarySample eval_boundary_uniform(const ExteriorMapSeries& map, int M);

/// Images w_p = g(z_p) of the prevertices; needs the closed form of g'.
std::vector<cplx> polygon_vertices(const ExteriorMapSeries& map);

/// Tail bound sum_{k>T} |g_k| rho^{-k} from a fit to the last quartile of
/// the coefficients under the given model.
double estimate_tail_bound(std::span<const cplx> coeffs, TailModel model, double rho);

}  // namespace cornergas
