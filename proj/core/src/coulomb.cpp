#include "cornergas/coulomb.hpp"

#include "cornergas/errors.hpp"
#include "cornergas/fredholm.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <limits>
#include <sstream>

namespace cornergas {

namespace {

constexpr double kPi = std::numbers::pi;

template <class Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

// One quadrature node on the boundary: point z, weight times dz/dt.
template <class Real>
struct Node {
    std::complex<Real> z;
    std::complex<Real> wdz;
};

template <class Real>
void accumulate(CMat<Real>& M, const std::vector<Node<Real>>& nodes, bool exterior)
{
    const int n = static_cast<int>(M.rows());
    std::vector<std::complex<Real>> P(n), Q(n);
    for (const auto& nd : nodes) {
        const std::complex<Real> z = nd.z, zb = std::conj(nd.z);
        if (!exterior) {
            // z^{k-1}, conj(z)^l
            std::complex<Real> p = 1, q = zb;
            for (int k = 0; k < n; ++k) {
                P[k] = p;
                Q[k] = q;
                p *= z;
                q *= zb;
            }
        } else {
            // z^{-k-1}, conj(z)^{-l}
            const std::complex<Real> iz = Real(1) / z, izb = std::conj(iz);
            std::complex<Real> p = iz * iz, q = izb;
            for (int k = 0; k < n; ++k) {
                P[k] = p;
                Q[k] = q;
                p *= iz;
                q *= izb;
            }
        }
        for (int l = 0; l < n; ++l) {
            const std::complex<Real> f = Q[l] * nd.wdz;
            for (int k = 0; k < n; ++k) M(k, l) += P[k] * f;
        }
    }
    // Stokes factor 1 / (2 i l)
    for (int l = 0; l < n; ++l) M.col(l) /= std::complex<Real>(0, 2 * (l + 1));
}

template <class Real>
using CPair = std::pair<std::complex<Real>, std::complex<Real>>;

// Nodes of the trapezoid rule on a smooth parametrized boundary; the curve is
// evaluated in Real so that extended precision reaches the nodes themselves.
template <class Real>
std::vector<Node<Real>> trapezoid_nodes(const std::function<CPair<Real>(Real)>& curve, int K)
{
    std::vector<Node<Real>> nodes(K);
    const Real h = Real(2) * std::numbers::pi_v<Real> / K;
    for (int j = 0; j < K; ++j) {
        const auto [z, dz] = curve(h * j);
        nodes[j] = {z, dz * h};
    }
    return nodes;
}

template <class Real>
std::complex<Real> widen(cplx c)
{
    return {Real(c.real()), Real(c.imag())};
}

// g(e^{it}) and its t-derivative i z g'(z) from the Laurent coefficients.
template <class Real>
CPair<Real> exterior_point(const ExteriorMapSeries& map, Real t)
{
    const std::complex<Real> z = std::polar(Real(1), t), w = Real(1) / z;
    std::complex<Real> s{}, ds{};
    for (int k = map.truncation(); k >= 0; --k) {
        s = s * w + widen<Real>(map.coeffs[k]);
        if (k >= 1) ds = ds * w + Real(k) * widen<Real>(map.coeffs[k]);
    }
    const Real r = map.r_inf;
    return {r * z + s, std::complex<Real>(0, 1) * z * (r - ds * w * w)};
}

template <class Real>
CPair<Real> interior_point(const InteriorMapSeries& f, Real t)
{
    const std::complex<Real> z = std::polar(Real(1), t);
    std::complex<Real> s{}, ds{};
    for (std::size_t k = f.coeffs.size(); k-- > 0;) {
        s = s * z + widen<Real>(f.coeffs[k]);
        ds = ds * z + Real(k + 1) * widen<Real>(f.coeffs[k]);
    }
    return {s * z, std::complex<Real>(0, 1) * z * ds};
}

// Composite 30-point Gauss-Legendre on each straight edge.
template <class Real>
std::vector<Node<Real>> polygon_nodes(const std::vector<cplx>& verts, int panels)
{
    using GL = boost::math::quadrature::gauss<Real, 30>;
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    std::vector<Node<Real>> nodes;
    const std::size_t m = verts.size();
    for (std::size_t e = 0; e < m; ++e) {
        const std::complex<Real> a(verts[e].real(), verts[e].imag());
        const std::complex<Real> b(verts[(e + 1) % m].real(), verts[(e + 1) % m].imag());
        const std::complex<Real> d = (b - a) / Real(panels);
        for (int p = 0; p < panels; ++p) {
            const std::complex<Real> c = a + d * (Real(p) + Real(0.5));
            for (std::size_t i = 0; i < x.size(); ++i) {
                const std::complex<Real> half = d * (x[i] / Real(2));
                nodes.push_back({c + half, d * (w[i] / Real(2))});
                nodes.push_back({c - half, d * (w[i] / Real(2))});
            }
        }
    }
    return nodes;
}

template <class Real>
struct Assembled {
    CMat<Real> M;
    double logdet = 0.0;
    bool pd = false;
};

template <class Real>
Assembled<Real> assemble(const std::vector<Node<Real>>& nodes, int n, bool exterior)
{
    Assembled<Real> out;
    out.M = CMat<Real>::Zero(n, n);
    accumulate(out.M, nodes, exterior);
    return out;
}

template <class Real>
void factor(Assembled<Real>& a)
{
    CMat<Real> H = (a.M + a.M.adjoint()) / Real(2);
    Eigen::LLT<CMat<Real>> llt(H);
    a.pd = llt.info() == Eigen::Success;
    if (!a.pd) return;
    Real s = 0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index j = 0; j < L.rows(); ++j) {
        const Real d = L(j, j).real();
        if (!(d > 0)) {
            a.pd = false;
            return;
        }
        s += 2 * std::log(d);
    }
    a.logdet = static_cast<double>(s);
}

// Largest entry change between two assemblies, relative to the Cauchy-Schwarz
// scale sqrt(M_kk M_ll) of each entry.
template <class Real>
double normalized_change(const CMat<Real>& a, const CMat<Real>& b)
{
    Real worst = 0;
    for (Eigen::Index l = 0; l < a.cols(); ++l)
        for (Eigen::Index k = 0; k < a.rows(); ++k) {
            const Real s = std::sqrt(std::abs(a(k, k)) * std::abs(a(l, l)));
            worst = std::max(worst, std::abs(a(k, l) - b(k, l)) / s);
        }
    return static_cast<double>(worst);
}

// Doubles the resolution until log det settles below 1e-9 or every entry has
// reached the rounding floor of Real; returns the last assembly.
template <class Real>
MomentMatrix converge(const std::function<std::vector<Node<Real>>(int)>& make_nodes, int start, int n,
                      bool exterior, const char* rule, Precision prec)
{
    const double floor = 1e3 * static_cast<double>(std::numeric_limits<Real>::epsilon());
    Assembled<Real> prev = assemble<Real>(make_nodes(start), n, exterior);
    factor(prev);
    int res = start;
    for (int it = 0; it < 14; ++it) {
        const int next = res * 2;
        Assembled<Real> cur = assemble<Real>(make_nodes(next), n, exterior);
        factor(cur);
        const double change = normalized_change<Real>(cur.M, prev.M);
        const bool settled =
            cur.pd && prev.pd && (std::abs(cur.logdet - prev.logdet) < 1e-9 || change <= floor);
        res = next;
        prev = std::move(cur);
        if (settled) {
            MomentMatrix out;
            out.n = n;
            out.rule = rule;
            out.resolution = res;
            out.error = change;
            out.precision = prec;
            out.hermitian_residual = static_cast<double>((prev.M - prev.M.adjoint()).cwiseAbs().maxCoeff());
            CMat<Real> H = (prev.M + prev.M.adjoint()) / Real(2);
            out.entries = H.template cast<cplx>();
            out.positive_definite = prev.pd;
            out.logdet = prev.logdet;
            return out;
        }
    }
    throw NumericalError("moment quadrature did not converge at the maximum resolution");
}

template <class Real>
MomentMatrix moments_for(const ExteriorMapSeries& map, int n, Precision prec)
{
    if (!map.corners.empty()) {
        const auto verts = polygon_vertices(map);
        return converge<Real>([&](int panels) { return polygon_nodes<Real>(verts, panels); }, 1, n, false,
                              "gauss-legendre-30", prec);
    }
    if (map.tail_model == TailModel::PowerLaw)
        throw InvalidArgument("moments_interior: corner family without polygon data");
    const std::function<CPair<Real>(Real)> curve = [&](Real t) { return exterior_point<Real>(map, t); };
    return converge<Real>([&](int K) { return trapezoid_nodes<Real>(curve, K); }, std::max(64, 8 * n), n,
                          false, "trapezoid", prec);
}

template <class Real>
MomentMatrix moments_for(const InteriorMapSeries& f, int n, bool exterior, Precision prec)
{
    const std::function<CPair<Real>(Real)> curve = [&](Real t) { return interior_point<Real>(f, t); };
    return converge<Real>([&](int K) { return trapezoid_nodes<Real>(curve, K); }, std::max(64, 8 * n), n,
                          exterior, "trapezoid", prec);
}

void check_n(int n, Precision p, const char* who)
{
    if (n < 1) throw InvalidArgument(std::string(who) + ": n must be >= 1");
    if (n > direct_route_cap(p)) {
        std::ostringstream os;
        os << who << ": n = " << n << " exceeds the direct-route cap " << direct_route_cap(p)
           << " for this precision";
        throw InvalidArgument(os.str());
    }
}

double require_pd(const MomentMatrix& M, const char* who)
{
    if (!M.positive_definite)
        throw NumericalError(std::string(who) +
                             ": moment matrix lost positive definiteness (conditioning limit reached)");
    return M.logdet;
}

}  // namespace

int direct_route_cap(Precision p) { return p == Precision::Double ? 24 : 48; }

MomentMatrix moments_interior(const ExteriorMapSeries& map, int n, Precision p)
{
    check_n(n, p, "moments_interior");
    return p == Precision::Double ? moments_for<double>(map, n, p) : moments_for<long double>(map, n, p);
}

MomentMatrix moments_interior(const InteriorMapSeries& f, int n, Precision p)
{
    check_n(n, p, "moments_interior");
    return p == Precision::Double ? moments_for<double>(f, n, false, p)
                                  : moments_for<long double>(f, n, false, p);
}

MomentMatrix moments_exterior(const InteriorMapSeries& f, int n, Precision p)
{
    check_n(n, p, "moments_exterior");
    return p == Precision::Double ? moments_for<double>(f, n, true, p)
                                  : moments_for<long double>(f, n, true, p);
}

double log_Z_disk(int n) { return n * std::log(kPi) - std::lgamma(n + 1.0); }

double logZ_interior_grunsky(const GrunskyMatrix& B, int n)
{
    return log_Z_disk(n) + n * (n + 1.0) * std::log(B.capacity) + logdet_truncated(B, n);
}

double logZ_exterior_grunsky(const GrunskyMatrix& B1, int n)
{
    return log_Z_disk(n) - n * (n + 1.0) * std::log(B1.capacity) + logdet_truncated(B1, n);
}

GrunskyMatrix grunsky_for_partition(const ExteriorMapSeries& map, int n)
{
    EngineOptions opt;
    opt.rows = std::max(n, 4);
    const int T = map.truncation();
    if (map.tail_model == TailModel::Exact)
        opt.cols = std::max(4 * opt.rows, 64);
    else
        opt.cols = std::max(4 * opt.rows, std::min(4096, T - opt.rows));
    opt.accuracy = AccuracyMode::None;
    return grunsky_psi_contour(map, n, opt);
}

double logZ_interior(const ExteriorMapSeries& map, int n, Route route, Precision p)
{
    if (route == Route::Direct) return require_pd(moments_interior(map, n, p), "logZ_interior");
    return logZ_interior_grunsky(grunsky_for_partition(map, n), n);
}

double logZ_exterior(const InteriorMapSeries& f, int n, Route route, Precision p)
{
    if (route == Route::Direct) return require_pd(moments_exterior(f, n, p), "logZ_exterior");
    EngineOptions opt;
    opt.rows = std::max(n, 4);
    opt.cols = std::max(4 * opt.rows, 64);
    opt.accuracy = AccuracyMode::None;
    return logZ_exterior_grunsky(grunsky_interior(f, n, opt), n);
}

double normalized_ratio(const GrunskyMatrix& B, int n) { return logdet_truncated(B, n); }

}  // namespace cornergas
