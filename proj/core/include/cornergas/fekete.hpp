#pragma once

#include "cornergas/conformal.hpp"
#include "cornergas/grunsky.hpp"

#include <vector>

namespace cornergas {

/// Boundary parametrized by the angle of the exterior map, w(theta) = g(e^{i theta}).
class BoundaryCurve {
public:
    explicit BoundaryCurve(const ExteriorMapSeries& map);

    /// w, dw/dtheta, d^2w/dtheta^2
    void eval(double theta, cplx& w, cplx& dw, cplx& d2w) const;
    double capacity() const { return map_.r_inf; }

private:
    ExteriorMapSeries map_;
    double radius_ = 1.0;
};

struct FeketeObjective {
    double value = 0.0;               ///< sum_{k<l} 2 log |w_k - w_l|
    std::vector<double> gradient;
};

FeketeObjective fekete_objective(const BoundaryCurve& curve, const std::vector<double>& thetas);

struct FeketeOptions {
    int restarts = 8;
    double tol = 1e-10;        ///< sup-norm of the gradient
    int max_iterations = 20000;
    double min_gap = 1e-9;     ///< minimum angular separation
};

struct FeketeSolution {
    int n = 0;
    std::vector<double> thetas;  ///< sorted, in [0, 2 pi)
    double value = 0.0;          ///< log Z_{n,inf}
    double grad_norm = 0.0;
    int restarts = 0;
    int iterations = 0;          ///< of the best restart
};

FeketeSolution fekete_optimize(const ExteriorMapSeries& map, int n, const FeketeOptions& opt = {});

struct TransfiniteEstimate {
    std::vector<int> ns;
    std::vector<double> estimates;       ///< exp(value / (n (n-1)))
    std::vector<double> circle_ratio;    ///< estimate / n^{1/(n-1)}
    bool decreasing = false;
    double last = 0.0;
};

TransfiniteEstimate transfinite_diameter_estimate(const std::vector<FeketeSolution>& sols);

struct PommerenkeCheck {
    std::vector<int> ns;
    std::vector<double> residuals;  ///< value - n(n-1) log r - n log n - I^F/8
    bool trend_decreasing = false;  ///< |residual| decreasing over the last three n
};

PommerenkeCheck verify_pommerenke(const ExteriorMapSeries& map, double pommerenke_energy,
                                  const std::vector<FeketeSolution>& sols);
/// Computes I^F from (B, d) on the leading square block and optimizes at each n.
PommerenkeCheck verify_pommerenke(const ExteriorMapSeries& map, const GrunskyMatrix& B,
                                  const LogDerivVector& d, const std::vector<int>& ns,
                                  const FeketeOptions& opt = {});

}  // namespace cornergas
