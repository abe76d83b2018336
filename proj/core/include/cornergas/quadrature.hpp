#pragma once

#include <complex>
#include <functional>

namespace cornergas::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
};

/// Adaptive Gauss-Kronrod (61-point) on a finite interval.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-14, unsigned max_depth = 20);

/// Integral of f over [0, inf) for an integrand decaying like exp(-rate x).
/// Integrates on [0, X] with X chosen from the rate and doubles X until the
/// value changes by less than `tol`. Throws NumericalError on non-convergence.
Result integrate_decaying(const std::function<double(double)>& f, double rate,
                          double tol = 1e-12);

/// Tanh-sinh quadrature for integrands with integrable endpoint
/// singularities. f receives (x, x - a, b - x), the last two computed without
/// cancellation near the endpoints, so that factors like (x - a)^beta stay
/// accurate.
Result integrate_singular(const std::function<double(double, double, double)>& f, double a,
                          double b, double tol = 1e-14);

/// Complex-valued convenience wrapper around integrate_singular.
std::complex<double> integrate_singular_complex(
    const std::function<std::complex<double>(double, double, double)>& f, double a, double b,
    double tol = 1e-14);

}  // namespace cornergas::quad
