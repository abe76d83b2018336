#include "cornergas/corners.hpp"

#include "cornergas/errors.hpp"
#include "cornergas/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace cornergas {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_smooth(double gamma) { return std::abs(gamma - 1.0) < 1e-15; }

// sinh(A) / sinh(B) for B > 0 without overflow.
double sinh_ratio(double A, double B)
{
    if (B < 1e-8) return A / B;
    if (B < 20.0) return std::sinh(A) / std::sinh(B);
    const double a = std::abs(A);
    const double v = std::exp(a - B) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * B));
    return A < 0.0 ? -v : v;
}

// sinh(beta x) / sinh(x), x >= 0, with the small-x series.
double sinh_quot(double beta, double x)
{
    if (x < 1e-4) return beta * (1.0 + (beta * beta - 1.0) * x * x / 6.0);
    return sinh_ratio(beta * x, x);
}

std::vector<double> harmonic_numbers(int n)
{
    std::vector<double> H(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) H[k] = H[k - 1] + 1.0 / k;
    return H;
}

// Dense n x inner matrix K_p(k, l).
Eigen::MatrixXd kernel_matrix(double gamma, int n, int inner)
{
    Eigen::MatrixXd K(n, inner);
    for (int l = 1; l <= inner; ++l)
        for (int k = 1; k <= n; ++k) K(k - 1, l - 1) = kernel_Kp(k, l, gamma);
    return K;
}

// tr G_n^i for the leading n x n block of a symmetric PSD G.
template <class Mat>
double leading_trace_power(const Mat& G, int n, int i)
{
    const auto Gn = G.topLeftCorner(n, n);
    if (i == 1) return std::real(Gn.trace());
    if (i == 2) return Gn.cwiseAbs2().sum();
    using Plain = typename Mat::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(Plain(Gn), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
        s += std::pow(std::max(0.0, es.eigenvalues()(j)), i);
    return s;
}

}  // namespace

double kernel_Kp(double u, double v, double gamma)
{
    if (!(u > 0.0 && v > 0.0)) throw InvalidArgument("kernel_Kp: arguments must be positive");
    if (is_smooth(gamma)) return 0.0;
    const double t = std::log(u / v);
    return Hp(t, gamma) / std::sqrt(u * v);
}

cplx kernel_K(int k, int l, std::span<const CornerSpec> corners)
{
    if (corners.empty()) throw InvalidArgument("kernel_K: empty corner list");
    cplx s{};
    for (const auto& c : corners)
        s += std::polar(1.0, c.theta * (k + l)) * kernel_Kp(k, l, c.gamma);
    return s;
}

double Hp(double t, double gamma)
{
    if (is_smooth(gamma)) return 0.0;
    const double s = std::sin(kPi * gamma);
    const double x = gamma * std::abs(t);
    // cos(pi gamma) - cosh(x), kept accurate for large x
    if (x > 40.0) return (gamma * s / (2.0 * kPi)) * (-2.0 * std::exp(-x)) / (1.0 - 2.0 * std::cos(kPi * gamma) * std::exp(-x));
    return (gamma * s / (2.0 * kPi)) / (std::cos(kPi * gamma) - std::cosh(x));
}

double Hp_hat(double xi, double gamma)
{
    if (is_smooth(gamma)) return 0.0;
    const double x = std::abs(xi);
    if (x < 1e-12) return gamma - 1.0;
    return sinh_ratio((1.0 - 1.0 / gamma) * kPi * x, kPi * x / gamma);
}

double Hp_hat_numeric(double xi, double gamma, double tol)
{
    if (is_smooth(gamma)) return 0.0;
    // H_p is even: the transform is 2 int_0^inf cos(xi x) H_p(x) dx.
    auto f = [&](double x) { return 2.0 * std::cos(xi * x) * Hp(x, gamma); };
    return quad::integrate_decaying(f, gamma, tol).value;
}

double trace_constant(int i, double gamma)
{
    if (i < 1) throw InvalidArgument("trace_constant: i must be >= 1");
    if (is_smooth(gamma)) return 0.0;
    const double rate = 2.0 * i * kPi * std::min(2.0 / gamma - 1.0, 1.0);
    auto f = [&](double x) { return std::pow(Hp_hat(x, gamma), 2 * i); };
    return quad::integrate_decaying(f, rate, 1e-14).value / kPi;
}

double predicted_trace_constant(int i, std::span<const CornerSpec> corners)
{
    double s = 0.0;
    for (const auto& c : corners) s += trace_constant(i, c.gamma);
    return s;
}

double corner_sum(std::span<const double> angles)
{
    double s = 0.0;
    for (double a : angles) {
        if (!(a > 0.0 && a < 2.0)) throw InvalidArgument("corner_sum: angle fractions must lie in (0, 2)");
        s += a + 1.0 / a - 2.0;
    }
    return s;
}

double corner_sum(std::span<const CornerSpec> corners, AngleMode mode)
{
    std::vector<double> a;
    for (const auto& c : corners) a.push_back(mode == AngleMode::Interior ? c.alpha : c.gamma);
    return corner_sum(a);
}

FinalIntegral finalintegral(double beta)
{
    if (!(std::abs(beta) < 1.0)) throw InvalidArgument("finalintegral: need |beta| < 1");
    FinalIntegral out;
    out.closed_form = beta * beta / (6.0 * (1.0 - beta * beta));
    if (beta == 0.0) return out;
    auto f = [&](double x) {
        const double q = sinh_quot(beta, x);
        return std::log1p(-q * q);
    };
    const double rate = 2.0 * (1.0 - std::abs(beta));
    // Even integrand: -(1/2 pi^2) * 2 int_0^inf.
    out.quadrature = -quad::integrate_decaying(f, rate, 1e-15).value / (kPi * kPi);
    return out;
}

double corner_anomaly_quadrature(std::span<const CornerSpec> corners)
{
    double s = 0.0;
    for (const auto& c : corners) {
        if (is_smooth(c.gamma)) continue;
        s += c.gamma * finalintegral(1.0 - c.gamma).quadrature;
    }
    return s;
}

std::vector<TraceCompareRow> trace_compare(const GrunskyMatrix& B, std::span<const CornerSpec> corners,
                                           const std::vector<int>& ns, int i_max, int inner)
{
    if (ns.empty()) return {};
    if (i_max < 1) throw InvalidArgument("trace_compare: i_max must be >= 1");
    const int nmax = *std::max_element(ns.begin(), ns.end());
    if (nmax > B.rows()) throw InvalidArgument("trace_compare: n exceeds the Grunsky truncation");
    if (inner <= 0) inner = B.cols();
    if (inner < nmax) throw InvalidArgument("trace_compare: inner sum shorter than n");

    Eigen::MatrixXcd CB = Eigen::MatrixXcd::Zero(nmax, nmax);
    CB.selfadjointView<Eigen::Lower>().rankUpdate(B.entries.topRows(nmax));
    CB.triangularView<Eigen::StrictlyUpper>() = CB.adjoint();

    // Corners with equal exterior angle share one kernel matrix.
    std::map<double, int> multiplicity;
    for (const auto& c : corners)
        if (!is_smooth(c.gamma)) ++multiplicity[c.gamma];
    std::vector<std::pair<Eigen::MatrixXd, int>> grams;
    for (const auto& [gamma, mult] : multiplicity) {
        const Eigen::MatrixXd K = kernel_matrix(gamma, nmax, inner);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nmax, nmax);
        G.selfadjointView<Eigen::Lower>().rankUpdate(K);
        G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
        grams.emplace_back(std::move(G), mult);
    }

    const auto H = harmonic_numbers(nmax);
    std::vector<double> c(i_max + 1, 0.0);
    for (int i = 1; i <= i_max; ++i) c[i] = predicted_trace_constant(i, corners);

    std::vector<TraceCompareRow> rows;
    for (int n : ns)
        for (int i = 1; i <= i_max; ++i) {
            TraceCompareRow r;
            r.n = n;
            r.i = i;
            r.tr_B = leading_trace_power(CB, n, i);
            for (const auto& [G, mult] : grams) r.tr_K += mult * leading_trace_power(G, n, i);
            r.difference = std::abs(r.tr_B - r.tr_K);
            r.harmonic_residual = r.tr_K - c[i] * H[n];
            rows.push_back(r);
        }
    return rows;
}

std::vector<double> kernel_trace_residual(double gamma, const std::vector<int>& ns, int i, int inner)
{
    const int nmax = *std::max_element(ns.begin(), ns.end());
    const Eigen::MatrixXd K = kernel_matrix(gamma, nmax, inner);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nmax, nmax);
    G.selfadjointView<Eigen::Lower>().rankUpdate(K);
    G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
    const auto H = harmonic_numbers(nmax);
    const double ci = trace_constant(i, gamma);
    std::vector<double> out;
    for (int n : ns) out.push_back(leading_trace_power(G, n, i) - ci * H[n]);
    return out;
}

double f_rho(double u, double v, double rho)
{
    return std::pow(u * v, rho - 0.5) * std::pow(u * u + v * v, -rho);
}

ResidualReport residual_bklAs(const GrunskyMatrix& B, std::span<const CornerSpec> corners,
                              const std::vector<std::pair<int, int>>& index_set)
{
    if (corners.empty())
        throw InvalidArgument("residual_bklAs: no corners, the comparison kernel vanishes identically");
    ResidualReport rep;
    rep.rho = corner_rho(corners);
    const double rho = rep.rho;
    for (const auto& [k, l] : index_set) {
        if (k < 1 || l < 1 || k > B.rows() || l > B.cols())
            throw InvalidArgument("residual_bklAs: index outside the Grunsky truncation");
        ResidualEntry e;
        e.k = k;
        e.l = l;
        e.b = B.b(k, l);
        e.K = kernel_K(k, l, corners);
        e.residual = std::abs(e.b - e.K);
        const double dk = k, dl = l;
        e.bound = std::sqrt(dk * dl) / (dk + dl) * (std::pow(dk, -rho) / dl + std::pow(dl, -rho) / dk);
        e.ratio = e.residual / e.bound;
        e.f_rho_ratio = std::abs(e.b) / f_rho(dk, dl, rho);
        e.accuracy_limited = B.accuracy > 0.1 * e.residual;
        rep.sup_ratio = std::max(rep.sup_ratio, e.ratio);
        rep.sup_f_rho_ratio = std::max(rep.sup_f_rho_ratio, e.f_rho_ratio);
        rep.any_accuracy_limited = rep.any_accuracy_limited || e.accuracy_limited;
        rep.entries.push_back(e);
    }
    return rep;
}

AsymptoticFit fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys, FitMethod method)
{
    if (xs.size() != ys.size()) throw InvalidArgument("fit_log_slope: xs and ys differ in length");
    if (xs.size() < 4) throw InvalidArgument("fit_log_slope: need at least 4 points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw InvalidArgument("fit_log_slope: xs must be strictly increasing");

    AsymptoticFit fit;
    fit.xs = xs;
    fit.ys = ys;
    fit.method = method;
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double ls = sxy / sxx;
    const double ls_icept = my - ls * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - ls_icept - ls * xs[i];
        rss += e * e;
    }
    fit.ls_slope = ls;
    for (std::size_t i = 1; i < xs.size(); ++i)
        fit.successive.push_back((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));

    if (method == FitMethod::LeastSquares) {
        fit.slope = ls;
        fit.intercept = ls_icept;
        fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
    } else {
        const std::size_t m = fit.successive.size();
        fit.slope = fit.successive[m - 1];
        fit.intercept = ys.back() - fit.slope * xs.back();
        fit.stderr_slope = std::abs(fit.successive[m - 1] - fit.successive[m - 2]);
    }
    return fit;
}

XiCheck xi_approx_check(const LogDerivVector& d_r, std::span<const CornerSpec> corners, double r)
{
    if (!(r > 1.0)) throw InvalidArgument("xi_approx_check: need r > 1");
    const double rho = corner_rho(corners);
    const Eigen::VectorXcd ds = d_r.scaled();
    XiCheck out;
    for (int k = 1; k <= d_r.N(); ++k) {
        cplx xi{};
        for (const auto& c : corners) xi += std::polar(1.0, c.theta * k) * (c.gamma - 1.0);
        const double lr = std::log(r);
        xi *= std::exp(-lr * k) / std::sqrt(static_cast<double>(k));
        const double dev = std::exp(lr * k) * std::pow(k, 0.5 * (1.0 + rho)) * std::abs(ds(k - 1) - xi);
        out.scaled_deviation.push_back(dev);
        out.sup = std::max(out.sup, dev);
    }
    return out;
}

}  // namespace cornergas
