#include "cornergas/conformal.hpp"

#include "cornergas/errors.hpp"
#include "cornergas/fft.hpp"
#include "cornergas/geometry.hpp"
#include "cornergas/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cornergas {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double t)
{
    t = std::fmod(t, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t;
}

// Coefficients of (1 - u)^beta, u the series variable.
std::vector<double> binomial_series(double beta, std::size_t len)
{
    std::vector<double> t(len);
    if (len == 0) return t;
    t[0] = 1.0;
    for (std::size_t j = 1; j < len; ++j)
        t[j] = t[j - 1] * (static_cast<double>(j) - 1.0 - beta) / static_cast<double>(j);
    return t;
}

// If the prevertices are equally spaced with equal exponents, returns the
// rotation z_0 of the first one so that prod (1 - z_p u) = 1 - (z_0 u)^m.
std::optional<cplx> regular_rotation(std::span<const CornerSpec> corners)
{
    const std::size_t m = corners.size();
    std::vector<double> th;
    for (const auto& c : corners) {
        if (std::abs(c.alpha - corners[0].alpha) > 1e-15) return std::nullopt;
        th.push_back(wrap_angle(c.theta));
    }
    std::sort(th.begin(), th.end());
    const double step = 2.0 * kPi / static_cast<double>(m);
    for (std::size_t p = 1; p < m; ++p)
        if (std::abs(th[p] - th[0] - step * static_cast<double>(p)) > 1e-14) return std::nullopt;
    return std::polar(1.0, th[0]);
}

void check_simple(std::span<const cplx> pts, const std::string& what)
{
    if (auto hit = geometry::find_self_intersection(pts)) {
        std::ostringstream os;
        os << what << ": boundary polyline is not simple (edges " << hit->first << " and "
           << hit->second << " of " << pts.size() << " cross)";
        throw NotSimpleCurve(os.str());
    }
}

}  // namespace

CornerSpec CornerSpec::make(double theta, double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0))
        throw InvalidArgument("CornerSpec: interior angle fraction must lie in (0, 2)");
    return CornerSpec{wrap_angle(theta), alpha, 2.0 - alpha};
}

double corner_rho(std::span<const CornerSpec> corners)
{
    double rho = 1.0;
    for (const auto& c : corners) rho = std::min(rho, c.gamma);
    return rho;
}

std::vector<CornerSpec> regular_polygon_corners(int m)
{
    if (m < 3) throw InvalidArgument("regular_polygon_corners: need m >= 3");
    std::vector<CornerSpec> out;
    const double alpha = static_cast<double>(m - 2) / static_cast<double>(m);
    for (int p = 0; p < m; ++p)
        out.push_back(CornerSpec::make(2.0 * kPi * p / static_cast<double>(m), alpha));
    return out;
}

std::vector<CornerSpec> balanced_triangle_corners(double alpha1, double alpha2, double alpha3)
{
    const double b1 = 1.0 - alpha1, b2 = 1.0 - alpha2, b3 = 1.0 - alpha3;
    if (std::abs(b1 + b2 + b3 - 2.0) > 1e-12)
        throw InvalidArgument("balanced_triangle_corners: angle fractions must sum to 1");
    // beta_1 + beta_2 e^{i t2} + beta_3 e^{i t3} = 0 closes a triangle with
    // side lengths beta_p.
    const double c2 = (b3 * b3 - b1 * b1 - b2 * b2) / (2.0 * b1 * b2);
    const double c3 = (b2 * b2 - b1 * b1 - b3 * b3) / (2.0 * b1 * b3);
    if (!(std::abs(c2) < 1.0 && std::abs(c3) < 1.0))
        throw InvalidArgument("balanced_triangle_corners: exponents violate the triangle inequality");
    return {CornerSpec::make(0.0, alpha1), CornerSpec::make(std::acos(c2), alpha2),
            CornerSpec::make(-std::acos(c3), alpha3)};
}

cplx ScFactor::derivative(cplx z) const
{
    cplx v = amplitude;
    const cplx u = 1.0 / (radial_scale * z);
    for (std::size_t p = 0; p < prevertices.size(); ++p)
        v *= std::pow(1.0 - prevertices[p] * u, betas[p]);
    return v;
}

double ExteriorMapSeries::boundary_epsilon() const
{
    return 1.0 / (4.0 * std::max(1, truncation()));
}

cplx ExteriorMapSeries::eval(cplx z) const
{
    const cplx w = 1.0 / z;
    cplx s{};
    for (int k = truncation(); k >= 0; --k) s = s * w + coeffs[k];
    return r_inf * z + s;
}

cplx ExteriorMapSeries::derivative(cplx z) const
{
    const cplx w = 1.0 / z;
    cplx s{};
    for (int k = truncation(); k >= 1; --k) s = s * w + static_cast<double>(k) * coeffs[k];
    return r_inf - s * w * w;
}

cplx ExteriorMapSeries::second_derivative(cplx z) const
{
    const cplx w = 1.0 / z;
    cplx s{};
    for (int k = truncation(); k >= 1; --k)
        s = s * w + static_cast<double>(k) * static_cast<double>(k + 1) * coeffs[k];
    return s * w * w * w;
}

void ExteriorMapSeries::sample_circle(double rho, int M, cplx* g, cplx* dg) const
{
    if (M <= 0) throw InvalidArgument("sample_circle: M must be positive");
    const int T = truncation();
    fft::Plan plan(M, fft::Direction::Forward);
    auto fill = [&](bool weighted) {
        fft::Buffer buf(static_cast<std::size_t>(M));
        std::fill(buf.data(), buf.data() + M, cplx{});
        for (int k = 0; k <= T; ++k) {
            const double wk = std::pow(rho, -k) * (weighted ? static_cast<double>(k) : 1.0);
            buf[k % M] += coeffs[k] * wk;
        }
        plan.execute(buf.data());
        return buf;
    };
    if (g) {
        auto s = fill(false);
        for (int j = 0; j < M; ++j) g[j] = r_inf * std::polar(rho, 2.0 * kPi * j / M) + s[j];
    }
    if (dg) {
        auto s = fill(true);
        for (int j = 0; j < M; ++j) dg[j] = r_inf - s[j] / std::polar(rho, 2.0 * kPi * j / M);
    }
}

cplx InteriorMapSeries::eval(cplx z) const
{
    cplx s{};
    for (std::size_t k = coeffs.size(); k-- > 0;) s = s * z + coeffs[k];
    return s * z;
}

cplx InteriorMapSeries::derivative(cplx z) const
{
    cplx s{};
    for (std::size_t k = coeffs.size(); k-- > 0;) s = s * z + static_cast<double>(k + 1) * coeffs[k];
    return s;
}

cplx InteriorMapSeries::second_derivative(cplx z) const
{
    cplx s{};
    for (std::size_t k = coeffs.size(); k-- > 1;)
        s = s * z + static_cast<double>(k + 1) * static_cast<double>(k) * coeffs[k];
    return s;
}

double estimate_tail_bound(std::span<const cplx> coeffs, TailModel model, double rho)
{
    if (model == TailModel::Exact) return 0.0;
    const int T = static_cast<int>(coeffs.size()) - 1;
    if (T < 8) return 0.0;
    double cmax = 0.0;
    for (int k = 1; k <= T; ++k) cmax = std::max(cmax, std::abs(coeffs[k]));
    if (cmax == 0.0) return 0.0;

    // Least-squares line through (x, log|g_k|) over the last quartile.
    std::vector<double> xs, ys;
    for (int k = (3 * T) / 4; k <= T; ++k) {
        const double a = std::abs(coeffs[k]);
        if (a > 1e-14 * cmax && k > 0) {
            xs.push_back(model == TailModel::Geometric ? static_cast<double>(k) : std::log(static_cast<double>(k)));
            ys.push_back(std::log(a));
        }
    }
    if (xs.size() < 4) return 0.0;
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    // Shift the intercept up so the fitted envelope dominates every sample.
    double lead = -1e300;
    for (std::size_t i = 0; i < xs.size(); ++i) lead = std::max(lead, ys[i] - slope * xs[i]);
    const double A = std::exp(lead);
    const double Tp1 = static_cast<double>(T + 1);

    if (model == TailModel::Geometric) {
        const double ratio = std::exp(slope) / rho;
        if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
        return A * std::pow(ratio, Tp1) / (1.0 - ratio);
    }
    const double p = -slope;
    double bound = std::numeric_limits<double>::infinity();
    if (rho > 1.0) bound = A * std::pow(Tp1, -p) * std::pow(rho, -Tp1) / (1.0 - 1.0 / rho);
    if (p > 1.0) bound = std::min(bound, A * std::pow(static_cast<double>(T), 1.0 - p) / (p - 1.0));
    return bound;
}

ExteriorMapSeries build_disk()
{
    ExteriorMapSeries g;
    g.family_tag = "disk";
    return g;
}

ExteriorMapSeries build_joukowski(double c)
{
    if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("build_joukowski: need 0 <= c < 1");
    ExteriorMapSeries g;
    g.coeffs = {cplx{}, cplx{c, 0.0}};
    std::ostringstream os;
    os << "joukowski(c=" << c << ")";
    g.family_tag = os.str();
    return g;
}

ExteriorMapSeries build_sc_exterior(std::span<const CornerSpec> corners, int N)
{
    if (N < 1) throw InvalidArgument("build_sc_exterior: truncation must be >= 1");
    const std::size_t m = corners.size();
    double beta_sum = 0.0;
    cplx residue{};
    for (const auto& c : corners) {
        if (!(c.alpha > 0.0 && c.alpha < 2.0) || std::abs(c.gamma - (2.0 - c.alpha)) > 1e-15)
            throw InvalidArgument("build_sc_exterior: malformed corner (need 0 < alpha < 2, gamma = 2 - alpha)");
        beta_sum += c.beta();
        residue += c.beta() * c.prevertex();
    }
    if (m < 3) throw InvalidArgument("build_sc_exterior: need at least 3 corners");
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q)
            if (std::abs(corners[p].prevertex() - corners[q].prevertex()) < 1e-12)
                throw InvalidArgument("build_sc_exterior: prevertices must be distinct");
    if (std::abs(beta_sum - 2.0) > 1e-12) {
        std::ostringstream os;
        os << "build_sc_exterior: sum of (1 - alpha_p) is " << beta_sum << ", expected 2";
        throw InvalidArgument(os.str());
    }
    if (std::abs(residue) > 1e-10) {
        std::ostringstream os;
        os << "build_sc_exterior: sum beta_p z_p = " << residue.real() << (residue.imag() < 0 ? "" : "+")
           << residue.imag() << "i is not zero, so g' has a 1/z term and g picks up a logarithm;"
           << " move the prevertices (e.g. balanced_triangle_corners)";
        throw InvalidArgument(os.str());
    }

    // g'(z) = sum_j c_j z^{-j}; we need c_0..c_{N+1}.
    const std::size_t len = static_cast<std::size_t>(N) + 2;
    std::vector<cplx> c(len);
    if (auto z0 = regular_rotation(corners)) {
        const std::size_t mm = m;
        const auto t = binomial_series(corners[0].beta(), len / mm + 1);
        for (std::size_t j = 0; j * mm < len; ++j) c[j * mm] = t[j] * std::pow(*z0, static_cast<double>(j * mm));
        // exact zeros elsewhere
    } else {
        c.assign(len, cplx{});
        c[0] = 1.0;
        for (const auto& corner : corners) {
            const auto t = binomial_series(corner.beta(), len);
            std::vector<cplx> f(len);
            cplx zp = 1.0;
            for (std::size_t j = 0; j < len; ++j) {
                f[j] = t[j] * zp;
                zp *= corner.prevertex();
            }
            c = fft::multiply_truncated(c, f, len);
        }
    }

    ExteriorMapSeries g;
    g.r_inf = 1.0;
    g.coeffs.assign(static_cast<std::size_t>(N) + 1, cplx{});
    for (int k = 1; k <= N; ++k) g.coeffs[k] = -c[k + 1] / static_cast<double>(k);
    g.corners.assign(corners.begin(), corners.end());
    ScFactor sc;
    for (const auto& corner : corners) {
        sc.prevertices.push_back(corner.prevertex());
        sc.betas.push_back(corner.beta());
    }
    g.sc = sc;
    std::ostringstream os;
    os << "sc(m=" << m << ";alpha=";
    for (std::size_t p = 0; p < m; ++p) os << (p ? "," : "") << corners[p].alpha;
    os << ")";
    g.family_tag = os.str();
    g.tail_model = TailModel::PowerLaw;
    g.tail_bound = estimate_tail_bound(g.coeffs, g.tail_model, 1.0 + g.boundary_epsilon());

    const int M = 8 * N;
    std::vector<cplx> pts(static_cast<std::size_t>(M));
    g.sample_circle(1.0 + g.boundary_epsilon(), M, pts.data(), nullptr);
    check_simple(pts, "build_sc_exterior");
    return g;
}

ExteriorMapSeries build_equipotential(const ExteriorMapSeries& map, double r)
{
    if (!(r > 1.0)) throw InvalidArgument("build_equipotential: need r > 1");
    ExteriorMapSeries g = map;
    for (int k = 0; k <= g.truncation(); ++k) g.coeffs[k] *= std::pow(r, -(k + 1));
    g.corners.clear();
    if (g.sc) g.sc->radial_scale *= r;
    std::ostringstream os;
    os << map.family_tag << "@r=" << r;
    g.family_tag = os.str();
    if (g.tail_model != TailModel::Exact) {
        g.tail_model = TailModel::Geometric;
        g.tail_bound = estimate_tail_bound(g.coeffs, g.tail_model, 1.0);
    }
    return g;
}

InteriorMapSeries build_interior_polynomial(std::span<const cplx> coeffs)
{
    if (coeffs.empty()) throw InvalidArgument("build_interior_polynomial: empty coefficient list");
    const cplx f1 = coeffs[0];
    if (!(f1.real() > 0.0) || std::abs(f1.imag()) > 1e-15 * f1.real())
        throw InvalidArgument("build_interior_polynomial: f_1 must be real and positive");
    InteriorMapSeries f;
    f.coeffs.assign(coeffs.begin(), coeffs.end());
    f.coeffs[0] = f1.real();
    f.r_0 = f1.real();

    const int M = std::max<int>(1024, 64 * static_cast<int>(coeffs.size()));
    std::vector<cplx> pts(static_cast<std::size_t>(M));
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < M; ++j) {
        const cplx z = std::polar(1.0, 2.0 * kPi * j / M);
        pts[j] = f.eval(z);
        margin = std::min(margin, std::abs(f.derivative(z)) / f.r_0);
    }
    f.univalence_margin = margin;
    check_simple(pts, "build_interior_polynomial");
    if (geometry::winding_number(pts, cplx{}) != 1)
        throw NotSimpleCurve("build_interior_polynomial: boundary does not wind once around 0");
    return f;
}

ExteriorMapSeries scaled(const ExteriorMapSeries& map, double lambda)
{
    if (!(lambda > 0.0)) throw InvalidArgument("scaled: need lambda > 0");
    ExteriorMapSeries g = map;
    g.r_inf *= lambda;
    for (auto& c : g.coeffs) c *= lambda;
    if (g.sc) g.sc->amplitude *= lambda;
    g.tail_bound *= lambda;
    return g;
}

ExteriorMapSeries translated(const ExteriorMapSeries& map, cplx shift)
{
    ExteriorMapSeries g = map;
    g.coeffs[0] += shift;
    return g;
}

ExteriorMapSeries rotated(const ExteriorMapSeries& map, double phi)
{
    ExteriorMapSeries g = map;
    for (int k = 0; k <= g.truncation(); ++k) g.coeffs[k] *= std::polar(1.0, (k + 1) * phi);
    for (auto& c : g.corners) c.theta = wrap_angle(c.theta + phi);
    if (g.sc)
        for (auto& z : g.sc->prevertices) z *= std::polar(1.0, phi);
    return g;
}

ExteriorMapSeries normalized(const ExteriorMapSeries& map) { return scaled(map, 1.0 / map.r_inf); }

BoundarySample eval_boundary(const ExteriorMapSeries& map, std::span<const double> thetas)
{
    if (thetas.empty()) throw InvalidArgument("eval_boundary: empty grid");
    BoundarySample s;
    s.radius = map.tail_model == TailModel::PowerLaw ? 1.0 + map.boundary_epsilon() : 1.0;
    s.theta.assign(thetas.begin(), thetas.end());
    s.w.resize(thetas.size());
    s.dw.resize(thetas.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(thetas.size()); ++j) {
        const cplx z = std::polar(s.radius, thetas[j]);
        s.w[j] = map.eval(z);
        s.dw[j] = cplx{0.0, 1.0} * z * map.derivative(z);
    }
    return s;
}

BoundarySample eval_boundary(const InteriorMapSeries& map, std::span<const double> thetas)
{
    if (thetas.empty()) throw InvalidArgument("eval_boundary: empty grid");
    BoundarySample s;
    s.theta.assign(thetas.begin(), thetas.end());
    s.w.resize(thetas.size());
    s.dw.resize(thetas.size());
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        const cplx z = std::polar(1.0, thetas[j]);
        s.w[j] = map.eval(z);
        s.dw[j] = cplx{0.0, 1.0} * z * map.derivative(z);
    }
    return s;
}

BoundarySample eval_boundary_uniform(const ExteriorMapSeries& map, int M)
{
    if (M <= 0) throw InvalidArgument("eval_boundary_uniform: empty grid");
    BoundarySample s;
    s.radius = map.tail_model == TailModel::PowerLaw ? 1.0 + map.boundary_epsilon() : 1.0;
    s.theta.resize(M);
    s.w.resize(M);
    s.dw.resize(M);
    map.sample_circle(s.radius, M, s.w.data(), s.dw.data());
    for (int j = 0; j < M; ++j) {
        s.theta[j] = 2.0 * kPi * j / M;
        s.dw[j] *= cplx{0.0, 1.0} * std::polar(s.radius, s.theta[j]);
    }
    return s;
}

std::vector<cplx> polygon_vertices(const ExteriorMapSeries& map)
{
    if (!map.sc || map.sc->radial_scale != 1.0)
        throw InvalidArgument("polygon_vertices: needs a Schwarz-Christoffel map with corners");
    const ScFactor& sc = *map.sc;
    std::vector<cplx> out;
    for (std::size_t p = 0; p < sc.prevertices.size(); ++p) {
        const cplx zp = sc.prevertices[p];
        // g(z_p) = g(2 z_p) - int_1^2 g'(t z_p) z_p dt; the factor for corner p
        // is ((t - 1)/t)^beta_p, evaluated from the endpoint distance.
        auto integrand = [&](double t, double da, double) {
            cplx v = sc.amplitude * zp * std::pow(da / t, sc.betas[p]);
            for (std::size_t q = 0; q < sc.prevertices.size(); ++q)
                if (q != p) v *= std::pow(1.0 - sc.prevertices[q] / (t * zp), sc.betas[q]);
            return v;
        };
        const cplx radial = quad::integrate_singular_complex(integrand, 1.0, 2.0, 1e-15);
        out.push_back(map.eval(2.0 * zp) - radial);
    }
    return out;
}

}  // namespace cornergas
