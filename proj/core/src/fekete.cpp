#include "cornergas/fekete.hpp"

#include "cornergas/errors.hpp"
#include "cornergas/fredholm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cornergas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Samples {
    std::vector<cplx> w, dw, d2w;
};

Samples sample(const BoundaryCurve& c, const std::vector<double>& th)
{
    Samples s;
    const std::size_t n = th.size();
    s.w.resize(n);
    s.dw.resize(n);
    s.d2w.resize(n);
    for (std::size_t k = 0; k < n; ++k) c.eval(th[k], s.w[k], s.dw[k], s.d2w[k]);
    return s;
}

double value_of(const Samples& s)
{
    const std::size_t n = s.w.size();
    double v = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) v += std::log(std::norm(s.w[k] - s.w[l]));
    return v;
}

std::vector<double> gradient_of(const Samples& s)
{
    const std::size_t n = s.w.size();
    std::vector<double> g(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            if (l != k) g[k] += 2.0 * (s.dw[k] / (s.w[k] - s.w[l])).real();
    return g;
}

Eigen::MatrixXd hessian_of(const Samples& s)
{
    const int n = static_cast<int>(s.w.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            if (l == k) continue;
            const cplx inv = 1.0 / (s.w[k] - s.w[l]);
            H(k, l) = 2.0 * (s.dw[k] * s.dw[l] * inv * inv).real();
            H(k, k) += 2.0 * (s.d2w[k] * inv - s.dw[k] * s.dw[k] * inv * inv).real();
        }
    return H;
}

double sup_norm(const std::vector<double>& g)
{
    double m = 0.0;
    for (double x : g) m = std::max(m, std::abs(x));
    return m;
}

// Cyclic gaps of angles kept in increasing order within one turn.
double min_gap(const std::vector<double>& th)
{
    const std::size_t n = th.size();
    double m = th[0] + kTwoPi - th[n - 1];
    for (std::size_t k = 1; k < n; ++k) m = std::min(m, th[k] - th[k - 1]);
    return m;
}

struct Run {
    std::vector<double> th;
    double value = -std::numeric_limits<double>::infinity();
    double grad = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

// Backtracking along direction p from th; returns true when an ascent step
// satisfying Armijo and the gap guard was found.
bool line_search(const BoundaryCurve& c, std::vector<double>& th, double& F, const std::vector<double>& g,
                 const std::vector<double>& p, double gap_floor)
{
    const std::size_t n = th.size();
    double slope = 0.0, pmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        slope += g[k] * p[k];
        pmax = std::max(pmax, std::abs(p[k]));
    }
    if (!(slope > 0.0) || pmax == 0.0) return false;
    // Step clipping keeps every point well inside its neighbours' gaps.
    double t = std::min(1.0, 0.25 * min_gap(th) / pmax);
    std::vector<double> trial(n);
    for (int it = 0; it < 60; ++it, t *= 0.5) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = th[k] + t * p[k];
        if (min_gap(trial) < gap_floor) continue;
        const double Ft = value_of(sample(c, trial));
        if (Ft >= F + 1e-4 * t * slope || (Ft > F && t * pmax < 1e-12)) {
            th = trial;
            F = Ft;
            return true;
        }
    }
    return false;
}

// Full Newton step judged by the gradient norm. Near the maximum the value
// changes drop below rounding, so the Armijo test alone stalls.
bool newton_step(const BoundaryCurve& c, std::vector<double>& th, double& F, double gn,
                 const std::vector<double>& p, double gap_floor)
{
    const std::size_t n = th.size();
    double pmax = 0.0;
    for (double x : p) pmax = std::max(pmax, std::abs(x));
    if (pmax == 0.0 || pmax > 0.25 * min_gap(th)) return false;
    std::vector<double> trial(n);
    for (std::size_t k = 0; k < n; ++k) trial[k] = th[k] + p[k];
    if (min_gap(trial) < gap_floor) return false;
    const Samples s = sample(c, trial);
    const double Ft = value_of(s);
    if (!(sup_norm(gradient_of(s)) < 0.5 * gn) || Ft < F - 1e-12 * std::max(1.0, std::abs(F))) return false;
    th = trial;
    F = Ft;
    return true;
}

Run optimize_from(const BoundaryCurve& c, std::vector<double> th, const FeketeOptions& opt)
{
    const int n = static_cast<int>(th.size());
    Run run;
    double F = value_of(sample(c, th));
    double mu = 1e-6;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Samples s = sample(c, th);
        const auto g = gradient_of(s);
        const double gn = sup_norm(g);
        run.grad = gn;
        if (gn <= opt.tol) break;

        bool moved = false;
        if (gn < 1e-2) {
            // Damped Newton on the concave part of the landscape.
            const Eigen::MatrixXd H = hessian_of(s);
            Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
            for (int attempt = 0; attempt < 12 && !moved; ++attempt) {
                Eigen::MatrixXd A = -H;
                A.diagonal().array() += mu * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
                Eigen::LLT<Eigen::MatrixXd> llt(A);
                if (llt.info() == Eigen::Success) {
                    const Eigen::VectorXd pv = llt.solve(gv);
                    std::vector<double> p(pv.data(), pv.data() + n);
                    if (newton_step(c, th, F, gn, p, opt.min_gap) || line_search(c, th, F, g, p, opt.min_gap)) {
                        moved = true;
                        mu = std::max(mu * 0.1, 1e-14);
                        break;
                    }
                }
                mu *= 10.0;
            }
        }
        if (!moved) {
            if (!line_search(c, th, F, g, g, opt.min_gap)) break;  // no ascent possible at double precision
        }
    }
    run.th = th;
    run.value = F;
    run.iterations = it;
    run.grad = sup_norm(gradient_of(sample(c, th)));
    return run;
}

}  // namespace

BoundaryCurve::BoundaryCurve(const ExteriorMapSeries& map) : map_(map)
{
    if (!map.corners.empty())
        throw InvalidArgument("BoundaryCurve: Fekete optimization needs an analytic curve (no corners)");
    radius_ = map.tail_model == TailModel::PowerLaw ? 1.0 + map.boundary_epsilon() : 1.0;
}

void BoundaryCurve::eval(double theta, cplx& w, cplx& dw, cplx& d2w) const
{
    const cplx z = std::polar(radius_, theta);
    const cplx g1 = map_.derivative(z);
    const cplx g2 = map_.second_derivative(z);
    w = map_.eval(z);
    dw = cplx{0.0, 1.0} * z * g1;
    d2w = -z * g1 - z * z * g2;
}

FeketeObjective fekete_objective(const BoundaryCurve& curve, const std::vector<double>& thetas)
{
    const Samples s = sample(curve, thetas);
    return {value_of(s), gradient_of(s)};
}

FeketeSolution fekete_optimize(const ExteriorMapSeries& map, int n, const FeketeOptions& opt)
{
    if (n < 2) throw InvalidArgument("fekete_optimize: need n >= 2");
    if (opt.restarts < 1) throw InvalidArgument("fekete_optimize: need at least one restart");
    const BoundaryCurve curve(map);
    std::vector<Run> runs(opt.restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < opt.restarts; ++r) {
        std::vector<double> th(n);
        const double phase = kTwoPi * r / (static_cast<double>(n) * opt.restarts);
        for (int k = 0; k < n; ++k) th[k] = phase + kTwoPi * k / n;
        runs[r] = optimize_from(curve, th, opt);
    }
    // Deterministic argmax in restart order.
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].value > runs[best].value) best = r;
    const Run& b = runs[best];
    if (!(b.grad <= opt.tol))
        throw NumericalError("fekete_optimize: no restart reached the gradient tolerance");

    FeketeSolution sol;
    sol.n = n;
    sol.value = b.value;
    sol.grad_norm = b.grad;
    sol.restarts = opt.restarts;
    sol.iterations = b.iterations;
    for (double t : b.th) {
        t = std::fmod(t, kTwoPi);
        sol.thetas.push_back(t < 0.0 ? t + kTwoPi : t);
    }
    std::sort(sol.thetas.begin(), sol.thetas.end());
    return sol;
}

TransfiniteEstimate transfinite_diameter_estimate(const std::vector<FeketeSolution>& sols)
{
    TransfiniteEstimate out;
    for (const auto& s : sols) {
        if (s.n < 2) throw InvalidArgument("transfinite_diameter_estimate: n must be >= 2");
        const double nn = s.n;
        out.ns.push_back(s.n);
        out.estimates.push_back(std::exp(s.value / (nn * (nn - 1.0))));
        out.circle_ratio.push_back(out.estimates.back() / std::pow(nn, 1.0 / (nn - 1.0)));
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.estimates.size(); ++i)
        if (!(out.ns[i] > out.ns[i - 1] && out.estimates[i] < out.estimates[i - 1])) out.decreasing = false;
    if (!out.estimates.empty()) out.last = out.estimates.back();
    return out;
}

PommerenkeCheck verify_pommerenke(const ExteriorMapSeries& map, double IF,
                                  const std::vector<FeketeSolution>& sols)
{
    if (!std::isfinite(IF)) throw InvalidArgument("verify_pommerenke: missing Fekete-Pommerenke energy");
    PommerenkeCheck out;
    const double lr = std::log(map.r_inf);
    for (const auto& s : sols) {
        const double n = s.n;
        out.ns.push_back(s.n);
        out.residuals.push_back(s.value - n * (n - 1.0) * lr - n * std::log(n) - IF / 8.0);
    }
    const std::size_t m = out.residuals.size();
    out.trend_decreasing = m >= 3 && std::abs(out.residuals[m - 1]) < std::abs(out.residuals[m - 2]) &&
                           std::abs(out.residuals[m - 2]) < std::abs(out.residuals[m - 3]);
    return out;
}

PommerenkeCheck verify_pommerenke(const ExteriorMapSeries& map, const GrunskyMatrix& B,
                                  const LogDerivVector& d, const std::vector<int>& ns,
                                  const FeketeOptions& opt)
{
    const int n = std::min({B.rows(), B.cols(), d.N()});
    const double IF = pommerenke_energy_value(B, d, n);
    std::vector<FeketeSolution> sols;
    for (int k : ns) sols.push_back(fekete_optimize(map, k, opt));
    return verify_pommerenke(map, IF, sols);
}

}  // namespace cornergas
