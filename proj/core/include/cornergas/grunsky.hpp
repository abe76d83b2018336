#pragma once

#include "cornergas/conformal.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace cornergas {

enum class Engine { LogFft, PsiContour, PowerSeries, Interior, Scaled };

const char* engine_name(Engine e);

/// Sampling metadata of an FFT engine run.
struct GridInfo {
    int M1 = 0;
    int M2 = 0;
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Truncated Grunsky matrix b_{kl} = sqrt(kl) a_{kl}, 1 <= k <= rows,
/// 1 <= l <= cols (entries(k-1, l-1)). Usually square; the rectangular form
/// lets products B B^* sum over more columns than rows are kept.
struct GrunskyMatrix {
    Eigen::MatrixXcd entries;
    Engine engine = Engine::LogFft;
    GridInfo grid;
    double accuracy = 0.0;  ///< estimated max entrywise error
    std::string accuracy_source = "none";
    double capacity = 1.0;  ///< r_inf (exterior) or r_0 (interior) of the source map
    std::string family_tag;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
    int N() const { return std::min(rows(), cols()); }
    cplx b(int k, int l) const { return entries(k - 1, l - 1); }
    /// Leading n x n block.
    Eigen::MatrixXcd square(int n) const;
};

enum class AccuracyMode { None, SelfConsistency };

struct EngineOptions {
    int rows = 0;           ///< 0: use N
    int cols = 0;           ///< 0: use rows
    double a = 4.0;         ///< radii r1 = 1 + a/rows, r2 = 1 + 2a/cols
    int oversample = 8;     ///< M_i = oversample * (rows or cols); must be >= 4
    std::size_t memory_budget = std::size_t(1) << 30;  ///< bytes for the second FFT stage
    AccuracyMode accuracy = AccuracyMode::SelfConsistency;
};

/// Samples log[(g(zeta) - g(z)) / (r_inf (zeta - z))] on two circles and
/// reads a_{kl} from a double FFT.
GrunskyMatrix grunsky_log_fft(const ExteriorMapSeries& map, int N, const EngineOptions& opt = {});

/// Samples Psi(z, w) = (z g'(z) - w g'(w)) / (g(z) - g(w)), whose (k, l)
/// coefficient is (k + l) a_{kl}.
GrunskyMatrix grunsky_psi_contour(const ExteriorMapSeries& map, int N, const EngineOptions& opt = {});

/// Exact power-series route, O(N^4): log of 1 - sum g_{p+q-1} zeta^{-p} z^{-q}.
/// Intended as a small-N reference.
GrunskyMatrix grunsky_power_series(const ExteriorMapSeries& map, int N);

/// Block b_{-k,-l} of an interior map f: D -> D, from the log kernel on two
/// circles of radii 1 - a/N, 1 - 2a/N.
GrunskyMatrix grunsky_interior(const InteriorMapSeries& f, int N, const EngineOptions& opt = {});

/// Exact coefficients for f(z) = z + c z^2:
/// a_{-k,-l} = (-1)^{k+l} c^{k+l} binom(k+l, k) / (k+l).
Eigen::MatrixXcd interior_quadratic_reference(double c, int N);

/// (B_r)_{kl} = r^{-(k+l)} b_{kl}, the Grunsky matrix of the equipotential g(r z)/r.
GrunskyMatrix scale_equipotential(const GrunskyMatrix& B, double r);

/// max |b_kl - b_lk| over the square part.
double symmetry_residual(const GrunskyMatrix& B);

/// Coefficients of log g'(z) = log r_inf - sum d_k z^{-k}; d(k-1) = d_k.
struct LogDerivVector {
    Eigen::VectorXcd d;
    double accuracy = 0.0;

    int N() const { return static_cast<int>(d.size()); }
    /// (sqrt(k) d_k)
    Eigen::VectorXcd scaled() const;
};

/// Route (a): d_k = sum_{j=1}^{k-1} a_{j,k-j}. Needs a capacity-1 source
/// unless `rescale` is set (the Grunsky data are scale invariant).
LogDerivVector dvector(const GrunskyMatrix& B, int N, bool rescale = false);

/// Route (b): FFT of log g' on |z| = 1 + a/N.
LogDerivVector dvector(const ExteriorMapSeries& map, int N, bool rescale = false, double a = 4.0,
                       int oversample = 8);

}  // namespace cornergas
