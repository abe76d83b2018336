#include "cornergas/grunsky.hpp"

#include "cornergas/errors.hpp"
#include "cornergas/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cornergas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Layout {
    int N1, N2, M1, M2;
};

// Two-stage DFT of an M1 x M2 sample array that is never stored whole.
// `row(i, out)` writes the M2 samples of row i. Returns X(k-1, l-1) =
// sum_{i,j} h_ij w1^{ik} w2^{jl}, k = 1..N1, l = 1..N2, where w = e^{+2 pi i/M}
// for Backward and e^{-2 pi i/M} for Forward.
//
// Stage one: a length-M2 FFT per row, keeping l = 1..N2. Stage two splits
// the rows into P residue classes mod P; each class is transformed with a
// length-M1/P FFT and folded into X with a twiddle e^{+-2 pi i c k / M1}.
template <class RowFn>
Eigen::MatrixXcd double_fft(const Layout& L, fft::Direction dir, std::size_t budget, RowFn&& row)
{
    const int M1 = L.M1, M2 = L.M2, N1 = L.N1, N2 = L.N2;
    int P = 1;
    auto bytes = [&](int p) { return static_cast<std::size_t>(M1 / p) * N2 * sizeof(cplx); };
    while (M1 % (2 * P) == 0 && M1 / (2 * P) > N1 && bytes(P) > budget) P *= 2;
    const int S = M1 / P;
    if (S <= N1) throw InvalidArgument("double_fft: grid too small for the requested truncation");

    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(N1, N2);
    fft::Buffer Y(static_cast<std::size_t>(S) * N2);  // column-major: Y[l * S + s]
    fft::Plan row_plan(M2, dir);
    fft::Plan col_plan(S, dir, N2, S);
    const double sgn = dir == fft::Direction::Backward ? 1.0 : -1.0;

    int nthreads = 1;
#ifdef _OPENMP
    nthreads = omp_get_max_threads();
#endif
    std::vector<fft::Buffer> scratch;
    for (int t = 0; t < nthreads; ++t) scratch.emplace_back(static_cast<std::size_t>(M2));

    for (int c = 0; c < P; ++c) {
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (int s = 0; s < S; ++s) {
            int tid = 0;
#ifdef _OPENMP
            tid = omp_get_thread_num();
#endif
            try {
                cplx* buf = scratch[tid].data();
                row(c + P * s, buf);
                row_plan.execute(buf);
                for (int l = 1; l <= N2; ++l) Y[static_cast<std::size_t>(l - 1) * S + s] = buf[l];
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        col_plan.execute(Y.data());
        std::vector<cplx> tw(N1);
        for (int k = 1; k <= N1; ++k) {
            const long long ck = (static_cast<long long>(c) * k) % M1;
            tw[k - 1] = std::polar(1.0, sgn * kTwoPi * static_cast<double>(ck) / M1);
        }
#pragma omp parallel for schedule(static)
        for (int l = 0; l < N2; ++l) {
            const cplx* z = Y.data() + static_cast<std::size_t>(l) * S;
            cplx* x = X.col(l).data();
            for (int k = 1; k <= N1; ++k) x[k - 1] += tw[k - 1] * z[k];
        }
    }
    return X;
}

// Branch of log v nearest to `prev`.
inline cplx log_near(cplx v, double prev_im)
{
    cplx L = std::log(v);
    const double n = std::round((prev_im - L.imag()) / kTwoPi);
    return {L.real(), L.imag() + kTwoPi * n};
}

std::string branch_message(const char* where, int i, int j, double jump)
{
    std::ostringstream os;
    os << where << ": log-kernel phase jumps by " << jump << " between adjacent samples near (" << i
       << ", " << j << "); refine the grid or move the radii";
    return os.str();
}

struct Sizes {
    int N1, N2;
};

Sizes resolve_sizes(int N, const EngineOptions& opt)
{
    const int N1 = opt.rows > 0 ? opt.rows : N;
    const int N2 = opt.cols > 0 ? opt.cols : N1;
    if (N1 < 1 || N2 < 1) throw InvalidArgument("Grunsky engine: truncation must be >= 1");
    if (opt.oversample < 4) throw InvalidArgument("Grunsky engine: grid too small (need M >= 4N)");
    if (!(opt.a > 0.0)) throw InvalidArgument("Grunsky engine: radius parameter must be positive");
    return {N1, N2};
}

// r1 = 1 + a/N1, r2 = 1 + 2a/N2, separated by at least a/(2 max N).
std::pair<double, double> exterior_radii(int N1, int N2, double a)
{
    const double r1 = 1.0 + a / N1;
    double r2 = 1.0 + 2.0 * a / N2;
    const double sep = a / (2.0 * std::max(N1, N2));
    if (std::abs(r2 - r1) < sep) r2 = r1 + 2.0 * sep;
    return {r1, r2};
}

GrunskyMatrix finish(Eigen::MatrixXcd X, const GridInfo& grid, bool psi, bool interior)
{
    const int N1 = static_cast<int>(X.rows()), N2 = static_cast<int>(X.cols());
    const double norm = 1.0 / (static_cast<double>(grid.M1) * grid.M2);
    std::vector<double> p1(N1 + 1), p2(N2 + 1);
    const double e = interior ? -1.0 : 1.0;
    for (int k = 0; k <= N1; ++k) p1[k] = std::pow(grid.r1, e * k);
    for (int l = 0; l <= N2; ++l) p2[l] = std::pow(grid.r2, e * l);
    for (int l = 1; l <= N2; ++l)
        for (int k = 1; k <= N1; ++k) {
            const cplx C = X(k - 1, l - 1) * norm * p1[k] * p2[l];
            const cplx a = psi ? C / static_cast<double>(k + l) : -C;
            X(k - 1, l - 1) = std::sqrt(static_cast<double>(k) * l) * a;
        }
    GrunskyMatrix B;
    B.entries = std::move(X);
    B.grid = grid;
    return B;
}

GrunskyMatrix log_engine(const ExteriorMapSeries& map, int N1, int N2, const EngineOptions& opt)
{
    const auto [r1, r2] = exterior_radii(N1, N2, opt.a);
    const int M1 = opt.oversample * N1, M2 = opt.oversample * N2;
    std::vector<cplx> G1(M1), G2(M2), Z1(M1), Z2(M2);
    map.sample_circle(r1, M1, G1.data(), nullptr);
    map.sample_circle(r2, M2, G2.data(), nullptr);
    for (int i = 0; i < M1; ++i) Z1[i] = std::polar(r1, kTwoPi * i / M1);
    for (int j = 0; j < M2; ++j) Z2[j] = std::polar(r2, kTwoPi * j / M2);
    const double rinf = map.r_inf;
    auto q = [&](int i, int j) { return (G1[i] - G2[j]) / (rinf * (Z1[i] - Z2[j])); };

    // Anchor column j = 0, unwrapped along i from the positive real axis.
    const double tol = kPi / 2.0;
    std::vector<double> anchor(M1);
    anchor[0] = std::arg(q(0, 0));
    for (int i = 1; i <= M1; ++i) {
        const int ii = i % M1;
        const double v = log_near(q(ii, 0), anchor[i - 1]).imag();
        if (std::abs(v - anchor[i - 1]) > tol)
            throw BranchError(branch_message("grunsky_log_fft", ii, 0, v - anchor[i - 1]));
        if (i < M1)
            anchor[i] = v;
        else if (std::abs(v - anchor[0]) > 1e-9)
            throw BranchError("grunsky_log_fft: log kernel does not close around the first circle");
    }

    auto row = [&](int i, cplx* out) {
        double prev = anchor[i];
        for (int j = 0; j < M2; ++j) {
            const cplx L = log_near(q(i, j), prev);
            if (std::abs(L.imag() - prev) > tol)
                throw BranchError(branch_message("grunsky_log_fft", i, j, L.imag() - prev));
            out[j] = L;
            prev = L.imag();
        }
        const double back = log_near(q(i, 0), prev).imag();
        if (std::abs(back - anchor[i]) > 1e-9)
            throw BranchError("grunsky_log_fft: log kernel does not close around the second circle");
    };
    auto X = double_fft({N1, N2, M1, M2}, fft::Direction::Backward, opt.memory_budget, row);
    auto B = finish(std::move(X), {M1, M2, r1, r2}, false, false);
    B.engine = Engine::LogFft;
    return B;
}

GrunskyMatrix psi_engine(const ExteriorMapSeries& map, int N1, int N2, const EngineOptions& opt)
{
    const auto [r1, r2] = exterior_radii(N1, N2, opt.a);
    const int M1 = opt.oversample * N1, M2 = opt.oversample * N2;
    std::vector<cplx> G1(M1), G2(M2), D1(M1), D2(M2);
    map.sample_circle(r1, M1, G1.data(), D1.data());
    map.sample_circle(r2, M2, G2.data(), D2.data());
    for (int i = 0; i < M1; ++i) D1[i] *= std::polar(r1, kTwoPi * i / M1);
    for (int j = 0; j < M2; ++j) D2[j] *= std::polar(r2, kTwoPi * j / M2);
    const double floor = 1e-13 * map.r_inf;

    auto row = [&](int i, cplx* out) {
        const cplx g1 = G1[i], zd1 = D1[i];
        for (int j = 0; j < M2; ++j) {
            const cplx den = g1 - G2[j];
            if (std::abs(den) < floor) {
                std::ostringstream os;
                os << "grunsky_psi_contour: |g(z) - g(w)| < 1e-13 at node (" << i << ", " << j
                   << "); separate the radii";
                throw RadiiCollision(os.str());
            }
            out[j] = (zd1 - D2[j]) / den - 1.0;
        }
    };
    auto X = double_fft({N1, N2, M1, M2}, fft::Direction::Backward, opt.memory_budget, row);
    auto B = finish(std::move(X), {M1, M2, r1, r2}, true, false);
    B.engine = Engine::PsiContour;
    return B;
}

template <class Engine>
GrunskyMatrix run_with_accuracy(Engine&& engine, int N1, int N2, const EngineOptions& opt)
{
    GrunskyMatrix B = engine(N1, N2, opt);
    if (opt.accuracy == AccuracyMode::SelfConsistency && N1 >= 4 && N2 >= 4) {
        GrunskyMatrix H = engine(N1 / 2, N2 / 2, opt);
        const int n1 = H.rows(), n2 = H.cols();
        B.accuracy = (B.entries.topLeftCorner(n1, n2) - H.entries).cwiseAbs().maxCoeff();
        B.accuracy_source = "self-consistency";
    }
    return B;
}

}  // namespace

const char* engine_name(Engine e)
{
    switch (e) {
    case Engine::LogFft: return "log-fft";
    case Engine::PsiContour: return "psi-contour";
    case Engine::PowerSeries: return "power-series";
    case Engine::Interior: return "interior-log-fft";
    case Engine::Scaled: return "scaled";
    }
    return "unknown";
}

Eigen::MatrixXcd GrunskyMatrix::square(int n) const
{
    if (n > rows() || n > cols()) throw InvalidArgument("GrunskyMatrix::square: n exceeds truncation");
    return entries.topLeftCorner(n, n);
}

GrunskyMatrix grunsky_log_fft(const ExteriorMapSeries& map, int N, const EngineOptions& opt)
{
    const auto [N1, N2] = resolve_sizes(N, opt);
    auto B = run_with_accuracy(
        [&](int n1, int n2, const EngineOptions& o) { return log_engine(map, n1, n2, o); }, N1, N2, opt);
    B.capacity = map.r_inf;
    B.family_tag = map.family_tag;
    return B;
}

GrunskyMatrix grunsky_psi_contour(const ExteriorMapSeries& map, int N, const EngineOptions& opt)
{
    const auto [N1, N2] = resolve_sizes(N, opt);
    auto B = run_with_accuracy(
        [&](int n1, int n2, const EngineOptions& o) { return psi_engine(map, n1, n2, o); }, N1, N2, opt);
    B.capacity = map.r_inf;
    B.family_tag = map.family_tag;
    return B;
}

GrunskyMatrix grunsky_power_series(const ExteriorMapSeries& map, int N)
{
    if (N < 1) throw InvalidArgument("grunsky_power_series: N must be >= 1");
    // (g(zeta) - g(z)) / (r (zeta - z)) = 1 - sum_{p,q>=1} (g_{p+q-1}/r) x^p y^q,
    // x = 1/zeta, y = 1/z. With L = log Q: p L_pq = p Q_pq - sum i L_ij Q_{p-i,q-j}.
    auto Q = [&](int p, int q) -> cplx {
        if (p == 0 && q == 0) return 1.0;
        if (p == 0 || q == 0) return 0.0;
        const int k = p + q - 1;
        return k <= map.truncation() ? -map.coeffs[k] / map.r_inf : cplx{};
    };
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (int p = 1; p <= N; ++p)
        for (int q = 1; q <= N; ++q) {
            cplx s = static_cast<double>(p) * Q(p, q);
            for (int i = 1; i <= p; ++i)
                for (int j = 1; j <= q; ++j) {
                    if (i == p && j == q) continue;
                    s -= static_cast<double>(i) * L(i, j) * Q(p - i, q - j);
                }
            L(p, q) = s / static_cast<double>(p);
        }
    GrunskyMatrix B;
    B.entries.resize(N, N);
    for (int k = 1; k <= N; ++k)
        for (int l = 1; l <= N; ++l) B.entries(k - 1, l - 1) = -std::sqrt(double(k) * l) * L(k, l);
    B.engine = Engine::PowerSeries;
    B.capacity = map.r_inf;
    B.family_tag = map.family_tag;
    B.accuracy_source = "exact";
    return B;
}

GrunskyMatrix grunsky_interior(const InteriorMapSeries& f, int N, const EngineOptions& opt)
{
    const auto [N1, N2] = resolve_sizes(N, opt);
    auto engine = [&](int n1, int n2, const EngineOptions& o) {
        // Mirror of the exterior rule, kept away from 0 for tiny truncations.
        const double r1 = std::max(0.3, 1.0 - o.a / n1);
        double r2 = std::max(0.3, 1.0 - 2.0 * o.a / n2);
        const double sep = o.a / (2.0 * std::max(n1, n2));
        if (std::abs(r2 - r1) < sep) r2 = r1 + 2.0 * sep < 1.0 ? r1 + 2.0 * sep : r1 - 2.0 * sep;
        const int M1 = o.oversample * n1, M2 = o.oversample * n2;
        std::vector<cplx> F1(M1), F2(M2), Z1(M1), Z2(M2);
        for (int i = 0; i < M1; ++i) {
            Z1[i] = std::polar(r1, kTwoPi * i / M1);
            F1[i] = f.eval(Z1[i]);
        }
        for (int j = 0; j < M2; ++j) {
            Z2[j] = std::polar(r2, kTwoPi * j / M2);
            F2[j] = f.eval(Z2[j]);
        }
        auto q = [&](int i, int j) { return (F1[i] - F2[j]) / (f.r_0 * (Z1[i] - Z2[j])); };
        const double tol = kPi / 2.0;
        std::vector<double> anchor(M1);
        anchor[0] = std::arg(q(0, 0));
        for (int i = 1; i < M1; ++i) {
            anchor[i] = log_near(q(i, 0), anchor[i - 1]).imag();
            if (std::abs(anchor[i] - anchor[i - 1]) > tol)
                throw BranchError(branch_message("grunsky_interior", i, 0, anchor[i] - anchor[i - 1]));
        }
        auto row = [&](int i, cplx* out) {
            double prev = anchor[i];
            for (int j = 0; j < M2; ++j) {
                const cplx L = log_near(q(i, j), prev);
                if (std::abs(L.imag() - prev) > tol)
                    throw BranchError(branch_message("grunsky_interior", i, j, L.imag() - prev));
                out[j] = L;
                prev = L.imag();
            }
        };
        auto X = double_fft({n1, n2, M1, M2}, fft::Direction::Forward, o.memory_budget, row);
        auto B = finish(std::move(X), {M1, M2, r1, r2}, false, true);
        B.engine = Engine::Interior;
        return B;
    };
    auto B = run_with_accuracy(engine, N1, N2, opt);
    B.capacity = f.r_0;
    B.family_tag = "interior-polynomial";
    return B;
}

Eigen::MatrixXcd interior_quadratic_reference(double c, int N)
{
    Eigen::MatrixXcd B(N, N);
    for (int k = 1; k <= N; ++k)
        for (int l = 1; l <= N; ++l) {
            const int m = k + l;
            // binom(m, k) c^m / m, accumulated in logs to avoid overflow.
            const double lg = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(l + 1.0) +
                              m * std::log(std::abs(c)) - std::log(static_cast<double>(m));
            double a = c == 0.0 ? 0.0 : std::exp(lg);
            if (c > 0.0 && m % 2 == 1) a = -a;  // sign of (-c)^m
            B(k - 1, l - 1) = std::sqrt(double(k) * l) * a;
        }
    return B;
}

GrunskyMatrix scale_equipotential(const GrunskyMatrix& B, double r)
{
    if (!(r > 1.0)) throw InvalidArgument("scale_equipotential: need r > 1");
    GrunskyMatrix out = B;
    const double lr = std::log(r);
    for (int l = 1; l <= B.cols(); ++l)
        for (int k = 1; k <= B.rows(); ++k) out.entries(k - 1, l - 1) *= std::exp(-lr * (k + l));
    std::ostringstream os;
    os << B.family_tag << "@r=" << r;
    out.family_tag = os.str();
    return out;
}

double symmetry_residual(const GrunskyMatrix& B)
{
    const int n = B.N();
    auto S = B.square(n);
    return (S - S.transpose()).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd LogDerivVector::scaled() const
{
    Eigen::VectorXcd s(d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) s(k) = std::sqrt(static_cast<double>(k + 1)) * d(k);
    return s;
}

LogDerivVector dvector(const GrunskyMatrix& B, int N, bool rescale)
{
    if (!rescale && std::abs(B.capacity - 1.0) > 1e-12)
        throw InvalidArgument("dvector: source map does not have capacity 1 (pass rescale)");
    LogDerivVector out;
    out.d = Eigen::VectorXcd::Zero(N);
    for (int k = 2; k <= N; ++k) {
        cplx s{};
        for (int j = 1; j < k; ++j) {
            const int lo = std::min(j, k - j), hi = std::max(j, k - j);
            int r = j, c = k - j;
            if (!(r <= B.rows() && c <= B.cols())) {
                r = lo;
                c = hi;
            }
            if (!(r <= B.rows() && c <= B.cols()))
                throw InvalidArgument("dvector: Grunsky matrix too small for the requested N");
            s += B.entries(r - 1, c - 1) / std::sqrt(static_cast<double>(r) * c);
        }
        out.d(k - 1) = s;
    }
    out.accuracy = B.accuracy * N;
    return out;
}

LogDerivVector dvector(const ExteriorMapSeries& map, int N, bool rescale, double a, int oversample)
{
    if (!rescale && std::abs(map.r_inf - 1.0) > 1e-12)
        throw InvalidArgument("dvector: map does not have capacity 1 (pass rescale)");
    if (oversample < 4) throw InvalidArgument("dvector: grid too small (need M >= 4N)");
    const double r = 1.0 + a / N;
    const int M = oversample * N;
    fft::Buffer buf(static_cast<std::size_t>(M));
    std::vector<cplx> dg(M);
    map.sample_circle(r, M, nullptr, dg.data());
    // log g' is single valued outside the disk; unwrap from the positive axis.
    double prev = std::arg(dg[0] / map.r_inf);
    for (int j = 0; j < M; ++j) {
        const cplx L = log_near(dg[j] / map.r_inf, prev);
        if (std::abs(L.imag() - prev) > kPi / 2.0)
            throw BranchError(branch_message("dvector", 0, j, L.imag() - prev));
        buf[j] = L;
        prev = L.imag();
    }
    fft::Plan plan(M, fft::Direction::Backward);
    plan.execute(buf.data());
    LogDerivVector out;
    out.d.resize(N);
    for (int k = 1; k <= N; ++k) out.d(k - 1) = -buf[k] / static_cast<double>(M) * std::pow(r, k);
    return out;
}

}  // namespace cornergas
