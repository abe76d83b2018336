#include "cornergas/quadrature.hpp"

#include "cornergas/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace cornergas::quad {

Result integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 unsigned max_depth)
{
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, tol, &err);
    return {v, err};
}

Result integrate_decaying(const std::function<double(double)>& f, double rate, double tol)
{
    if (!(rate > 0.0)) throw InvalidArgument("integrate_decaying: decay rate must be positive");
    // exp(-rate X) below double epsilon squared-ish: 40 / rate.
    double upper = 40.0 / rate;
    Result prev = integrate(f, 0.0, upper);
    for (int it = 0; it < 8; ++it) {
        upper *= 2.0;
        Result cur = integrate(f, 0.0, upper);
        if (std::abs(cur.value - prev.value) < tol) {
            cur.error = std::max(cur.error, std::abs(cur.value - prev.value));
            return cur;
        }
        prev = cur;
    }
    throw NumericalError("integrate_decaying: no convergence after enlarging the interval");
}

Result integrate_singular(const std::function<double(double, double, double)>& f, double a,
                          double b, double tol)
{
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    double l1 = 0.0;
    // boost passes xc = a - x near a and xc = b - x near b.
    const double mid = 0.5 * (a + b);
    auto g = [&](double x, double xc) {
        const double da = (x < mid) ? -xc : x - a;
        const double db = (x < mid) ? b - x : xc;
        return f(x, da, db);
    };
    const double v = ts.integrate(g, a, b, tol, &err, &l1);
    if (!std::isfinite(v)) throw NumericalError("integrate_singular: non-finite result");
    return {v, err};
}

std::complex<double> integrate_singular_complex(
    const std::function<std::complex<double>(double, double, double)>& f, double a, double b,
    double tol)
{
    const double re =
        integrate_singular([&](double x, double da, double db) { return f(x, da, db).real(); }, a, b, tol).value;
    const double im =
        integrate_singular([&](double x, double da, double db) { return f(x, da, db).imag(); }, a, b, tol).value;
    return {re, im};
}

}  // namespace cornergas::quad
