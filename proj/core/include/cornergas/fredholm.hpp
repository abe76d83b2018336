#pragma once

#include "cornergas/grunsky.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace cornergas {

struct EnergyReport {
    double value = 0.0;
    std::vector<std::pair<int, double>> truncations;  ///< (n, partial value)
    bool converged = false;
    double tolerance = 0.0;
};

/// C_n = P_n B B^* P_n: the first n rows of B times their adjoint, the inner
/// sum running over every stored column.
Eigen::MatrixXcd truncated_gram(const Eigen::MatrixXcd& B, int n);

/// Cholesky factor of I - C_n. Throws NumericalError when I - C_n is not
/// positive definite (Grunsky inequality violated by the input).
class FredholmFactor {
public:
    FredholmFactor(const Eigen::MatrixXcd& B, int n);
    int n() const { return n_; }
    /// log det(I - C_m) for m <= n, from the leading m pivots.
    double logdet(int m) const;
    double logdet() const { return logdet(n_); }
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

private:
    int n_;
    Eigen::LLT<Eigen::MatrixXcd> llt_;
};

/// log det(I - P_n B B^* P_n) <= 0.
double logdet_truncated(const GrunskyMatrix& B, int n);
/// Same for several n with a single factorization; ns need not be sorted.
std::vector<double> logdet_sequence(const GrunskyMatrix& B, const std::vector<int>& ns);
/// Debug path: sum log(1 - s_j^2) over the singular values of the first n rows.
double logdet_svd(const GrunskyMatrix& B, int n);

/// -12 log det at dyadic n up to B.N(); converged when the last two dyadic
/// partials differ by less than tol.
EnergyReport loewner_energy(const GrunskyMatrix& B, double tol = 1e-10);

/// tr C_n^i for i = 1..i_max from the eigenvalues of C_n.
std::vector<double> trace_powers(const GrunskyMatrix& B, int n, int i_max);
std::vector<double> trace_powers(const Eigen::MatrixXcd& Cn, int i_max);

/// Largest singular value of the leading n x n block (or of the first n
/// rows against every stored column when all_columns is set).
double operator_norm(const GrunskyMatrix& B, int n, bool all_columns = false);

/// I^F = 2 Re d^*(I - B B^*)^{-1}(d - B conj(d)) on the leading n x n block
/// (symmetrized). With extended_inner the products run over every column
/// of B available in d.
double pommerenke_energy_value(const GrunskyMatrix& B, const LogDerivVector& d, int n,
                               bool extended_inner = false);
/// 2 v^T (I + K)^{-1} v with K = [[B1, B2], [B2, -B1]], v = [Re d; Im d].
double pommerenke_energy_real_block(const GrunskyMatrix& B, const LogDerivVector& d, int n);
/// Dyadic truncations up to n_max, converged when |delta| < max(1e-10, 1e-6 |value|).
EnergyReport pommerenke_energy(const GrunskyMatrix& B, const LogDerivVector& d, int n_max,
                               bool extended_inner = false);

/// Energy pair for the equipotential B_r = r^{-(k+l)} b_kl truncated to n
/// rows (all columns), sharing one factorization.
struct EquipotentialEnergies {
    double r = 0.0;
    int n = 0;
    double loewner = 0.0;
    double pommerenke = 0.0;
};
EquipotentialEnergies equipotential_energies(const GrunskyMatrix& B, const LogDerivVector& d,
                                             double r, int n);

}  // namespace cornergas
