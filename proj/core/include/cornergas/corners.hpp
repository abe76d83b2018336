#pragma once

#include "cornergas/conformal.hpp"
#include "cornergas/grunsky.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cornergas {

/// K_p(u, v) = -(gamma sin(pi gamma) / (pi sqrt(uv))) / ((u/v)^gamma + (v/u)^gamma - 2 cos(pi gamma)).
double kernel_Kp(double u, double v, double gamma);
/// K(k, l) = sum_p z_p^{k+l} K_p(k, l).
cplx kernel_K(int k, int l, std::span<const CornerSpec> corners);

/// H_p(t) = (gamma sin(pi gamma) / 2 pi) / (cos(pi gamma) - cosh(gamma t)).
double Hp(double t, double gamma);
/// sinh((1 - 1/gamma) pi xi) / sinh(pi xi / gamma), equal to gamma - 1 at xi = 0.
double Hp_hat(double xi, double gamma);
/// int e^{-i xi x} H_p(x) dx by quadrature.
double Hp_hat_numeric(double xi, double gamma, double tol = 1e-13);

/// (1/2 pi) int Hhat_p(xi)^{2i} d xi for one exterior angle fraction.
double trace_constant(int i, double gamma);
/// Sum of trace_constant over the corners.
double predicted_trace_constant(int i, std::span<const CornerSpec> corners);

enum class AngleMode { Interior, Exterior };
/// sum (a + 1/a - 2) over alpha_p (Interior) or gamma_p (Exterior).
double corner_sum(std::span<const CornerSpec> corners, AngleMode mode);
double corner_sum(std::span<const double> angles);

struct FinalIntegral {
    double closed_form = 0.0;
    double quadrature = 0.0;
};
/// beta^2 / (6 (1 - beta^2)) against -(1/2 pi^2) int log(1 - sinh^2(beta x)/sinh^2 x) dx.
FinalIntegral finalintegral(double beta);

/// -(gamma/2 pi^2) int log(1 - sinh^2((1-gamma)x)/sinh^2 x) dx summed over corners.
double corner_anomaly_quadrature(std::span<const CornerSpec> corners);

struct TraceCompareRow {
    int n = 0;
    int i = 0;
    double tr_B = 0.0;        ///< tr (P_n B B^* P_n)^i
    double tr_K = 0.0;        ///< sum_p tr (P_n K_p^2 P_n)^i
    double difference = 0.0;  ///< |tr_B - tr_K|
    double harmonic_residual = 0.0;  ///< tr_K - c_i H_n, c_i summed over corners
};

/// Trace comparison at each n in ns (<= B.rows()), i = 1..i_max. The K_p
/// products sum over `inner` columns (0: same column count as B).
std::vector<TraceCompareRow> trace_compare(const GrunskyMatrix& B, std::span<const CornerSpec> corners,
                                           const std::vector<int>& ns, int i_max, int inner = 0);

/// tr (P_n K_p^2 P_n)^i - c_i H_n for a single exterior angle, inner sum over `inner` columns.
std::vector<double> kernel_trace_residual(double gamma, const std::vector<int>& ns, int i, int inner);

struct ResidualEntry {
    int k = 0;
    int l = 0;
    cplx b;
    cplx K;
    double residual = 0.0;  ///< |b_kl - K(k, l)|
    double bound = 0.0;     ///< sqrt(kl)/(k+l) (k^{-rho} l^{-1} + k^{-1} l^{-rho})
    double ratio = 0.0;     ///< residual / bound
    double f_rho_ratio = 0.0;  ///< |b_kl| / f_rho(k, l)
    bool accuracy_limited = false;  ///< B accuracy exceeds a tenth of the residual
};

struct ResidualReport {
    double rho = 1.0;
    std::vector<ResidualEntry> entries;
    double sup_ratio = 0.0;
    double sup_f_rho_ratio = 0.0;
    bool any_accuracy_limited = false;
};

ResidualReport residual_bklAs(const GrunskyMatrix& B, std::span<const CornerSpec> corners,
                              const std::vector<std::pair<int, int>>& index_set);

/// (uv)^{rho-1/2} (u^2+v^2)^{-rho}
double f_rho(double u, double v, double rho);

enum class FitMethod { LeastSquares, SuccessiveDifferences };

struct AsymptoticFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
    FitMethod method = FitMethod::LeastSquares;
    double ls_slope = 0.0;
    std::vector<double> successive;  ///< slopes of adjacent pairs
};

AsymptoticFit fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys, FitMethod method);

struct XiCheck {
    std::vector<double> scaled_deviation;  ///< r^k k^{(1+rho)/2} |dvec_k(r) - xi_k(r)|, k = 1..N
    double sup = 0.0;
};

/// d_r holds d_k of the equipotential eta_r (capacity 1).
XiCheck xi_approx_check(const LogDerivVector& d_r, std::span<const CornerSpec> corners, double r);

}  // namespace cornergas
