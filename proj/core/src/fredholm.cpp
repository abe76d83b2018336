#include "cornergas/fredholm.hpp"

#include "cornergas/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cornergas {

namespace {

void require_rows(const GrunskyMatrix& B, int n, const char* who)
{
    if (n < 1 || n > B.rows()) {
        std::ostringstream os;
        os << who << ": n = " << n << " outside 1.." << B.rows();
        throw InvalidArgument(os.str());
    }
}

std::vector<int> dyadic_up_to(int N)
{
    std::vector<int> ns;
    for (int n = 1; n < N; n *= 2) ns.push_back(n);
    ns.push_back(N);
    return ns;
}

Eigen::MatrixXcd symmetrized_block(const GrunskyMatrix& B, int n)
{
    Eigen::MatrixXcd S = B.square(n);
    return 0.5 * (S + S.transpose().eval());
}

}  // namespace

Eigen::MatrixXcd truncated_gram(const Eigen::MatrixXcd& B, int n)
{
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    C.selfadjointView<Eigen::Lower>().rankUpdate(B.topRows(n));
    C.triangularView<Eigen::StrictlyUpper>() = C.adjoint();
    return C;
}

FredholmFactor::FredholmFactor(const Eigen::MatrixXcd& B, int n) : n_(n)
{
    if (n < 1 || n > B.rows()) throw InvalidArgument("FredholmFactor: n out of range");
    Eigen::MatrixXcd A = -truncated_gram(B, n);
    A.diagonal().array() += 1.0;
    llt_.compute(A);
    if (llt_.info() != Eigen::Success)
        throw NumericalError(
            "I - B B^* is not positive definite: the input violates the Grunsky inequality");
    const auto L = llt_.matrixLLT();
    for (int j = 0; j < n; ++j)
        if (!(L(j, j).real() > 0.0) || !std::isfinite(L(j, j).real()))
            throw NumericalError("I - B B^* lost positive definiteness during factorization");
}

double FredholmFactor::logdet(int m) const
{
    if (m < 0 || m > n_) throw InvalidArgument("FredholmFactor::logdet: m out of range");
    const auto& L = llt_.matrixLLT();
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += 2.0 * std::log(L(j, j).real());
    return s;
}

Eigen::VectorXcd FredholmFactor::solve(const Eigen::VectorXcd& rhs) const { return llt_.solve(rhs); }

double logdet_truncated(const GrunskyMatrix& B, int n)
{
    require_rows(B, n, "logdet_truncated");
    return FredholmFactor(B.entries, n).logdet();
}

std::vector<double> logdet_sequence(const GrunskyMatrix& B, const std::vector<int>& ns)
{
    if (ns.empty()) return {};
    const int nmax = *std::max_element(ns.begin(), ns.end());
    require_rows(B, nmax, "logdet_sequence");
    FredholmFactor F(B.entries, nmax);
    std::vector<double> out;
    for (int n : ns) out.push_back(F.logdet(n));
    return out;
}

double logdet_svd(const GrunskyMatrix& B, int n)
{
    require_rows(B, n, "logdet_svd");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(B.entries.topRows(n));
    double s = 0.0;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
        const double sv = svd.singularValues()(j);
        if (sv >= 1.0) throw NumericalError("logdet_svd: singular value >= 1");
        s += std::log1p(-sv * sv);
    }
    return s;
}

EnergyReport loewner_energy(const GrunskyMatrix& B, double tol)
{
    EnergyReport rep;
    rep.tolerance = tol;
    const auto ns = dyadic_up_to(B.N());
    FredholmFactor F(B.entries, B.N());
    for (int n : ns) rep.truncations.emplace_back(n, -12.0 * F.logdet(n));
    rep.value = rep.truncations.back().second;
    if (rep.truncations.size() >= 2) {
        const double prev = rep.truncations[rep.truncations.size() - 2].second;
        rep.converged = std::abs(rep.value - prev) < tol;
    }
    return rep;
}

std::vector<double> trace_powers(const Eigen::MatrixXcd& Cn, int i_max)
{
    if (i_max < 1) throw InvalidArgument("trace_powers: i_max must be >= 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Cn, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("trace_powers: eigensolver failed");
    const auto& ev = es.eigenvalues();
    const double tol = 1e-10 * std::max(1.0, static_cast<double>(Cn.rows()) * 1e-3);
    std::vector<double> tr(i_max, 0.0);
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
        double lam = ev(j);
        if (lam < -tol || lam >= 1.0) {
            std::ostringstream os;
            os << "trace_powers: eigenvalue " << lam << " of C_n outside [0, 1)";
            throw NumericalError(os.str());
        }
        lam = std::max(lam, 0.0);
        double p = lam;
        for (int i = 0; i < i_max; ++i) {
            tr[i] += p;
            p *= lam;
        }
    }
    return tr;
}

std::vector<double> trace_powers(const GrunskyMatrix& B, int n, int i_max)
{
    require_rows(B, n, "trace_powers");
    return trace_powers(truncated_gram(B.entries, n), i_max);
}

double operator_norm(const GrunskyMatrix& B, int n, bool all_columns)
{
    require_rows(B, n, "operator_norm");
    Eigen::MatrixXcd C;
    if (all_columns) {
        C = truncated_gram(B.entries, n);
    } else {
        const auto S = B.square(n);
        C = S * S.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double pommerenke_energy_value(const GrunskyMatrix& B, const LogDerivVector& d, int n,
                               bool extended_inner)
{
    require_rows(B, n, "pommerenke_energy");
    if (n > d.N()) throw InvalidArgument("pommerenke_energy: d-vector shorter than n");
    const Eigen::VectorXcd ds = d.scaled();
    if (!extended_inner) {
        if (n > B.cols()) throw InvalidArgument("pommerenke_energy: n exceeds the column count");
        const Eigen::MatrixXcd S = symmetrized_block(B, n);
        const Eigen::VectorXcd dn = ds.head(n);
        const Eigen::VectorXcd rhs = dn - S * dn.conjugate();
        const FredholmFactor F(S, n);
        return 2.0 * dn.dot(F.solve(rhs)).real();
    }
    const int c = std::min(B.cols(), d.N());
    const Eigen::MatrixXcd Bn = B.entries.topLeftCorner(n, c);
    const Eigen::VectorXcd dn = ds.head(n);
    const Eigen::VectorXcd rhs = dn - Bn * ds.head(c).conjugate();
    const FredholmFactor F(Bn, n);
    return 2.0 * dn.dot(F.solve(rhs)).real();
}

double pommerenke_energy_real_block(const GrunskyMatrix& B, const LogDerivVector& d, int n)
{
    require_rows(B, n, "pommerenke_energy_real_block");
    if (n > d.N() || n > B.cols()) throw InvalidArgument("pommerenke_energy_real_block: n too large");
    const Eigen::MatrixXcd S = symmetrized_block(B, n);
    Eigen::MatrixXd K(2 * n, 2 * n);
    K.topLeftCorner(n, n) = S.real();
    K.topRightCorner(n, n) = S.imag();
    K.bottomLeftCorner(n, n) = S.imag();
    K.bottomRightCorner(n, n) = -S.real();
    K.diagonal().array() += 1.0;
    const Eigen::VectorXcd ds = d.scaled().head(n);
    Eigen::VectorXd v(2 * n);
    v.head(n) = ds.real();
    v.tail(n) = ds.imag();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericalError("pommerenke_energy_real_block: I + K is not positive definite");
    return 2.0 * v.dot(ldlt.solve(v));
}

EnergyReport pommerenke_energy(const GrunskyMatrix& B, const LogDerivVector& d, int n_max,
                               bool extended_inner)
{
    EnergyReport rep;
    for (int n : dyadic_up_to(n_max))
        rep.truncations.emplace_back(n, pommerenke_energy_value(B, d, n, extended_inner));
    rep.value = rep.truncations.back().second;
    rep.tolerance = std::max(1e-10, 1e-6 * std::abs(rep.value));
    if (rep.truncations.size() >= 2) {
        const double prev = rep.truncations[rep.truncations.size() - 2].second;
        rep.converged = std::abs(rep.value - prev) < rep.tolerance;
    }
    return rep;
}

EquipotentialEnergies equipotential_energies(const GrunskyMatrix& B, const LogDerivVector& d,
                                             double r, int n)
{
    if (!(r > 1.0)) throw InvalidArgument("equipotential_energies: need r > 1");
    require_rows(B, n, "equipotential_energies");
    const int c = std::min(B.cols(), d.N());
    if (n > c) throw InvalidArgument("equipotential_energies: n exceeds available columns");
    const double lr = std::log(r);
    Eigen::MatrixXcd Br(n, c);
    for (int l = 1; l <= c; ++l)
        for (int k = 1; k <= n; ++k) Br(k - 1, l - 1) = B.entries(k - 1, l - 1) * std::exp(-lr * (k + l));
    Eigen::VectorXcd dr = d.scaled().head(c);
    for (int k = 1; k <= c; ++k) dr(k - 1) *= std::exp(-lr * k);

    const FredholmFactor F(Br, n);
    EquipotentialEnergies e;
    e.r = r;
    e.n = n;
    e.loewner = -12.0 * F.logdet();
    const Eigen::VectorXcd dn = dr.head(n);
    const Eigen::VectorXcd rhs = dn - Br * dr.conjugate();
    e.pommerenke = 2.0 * dn.dot(F.solve(rhs)).real();
    return e;
}

}  // namespace cornergas
