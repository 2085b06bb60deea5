#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"

namespace coherent {

using FockEntries = Eigen::MatrixXcd;

/// Operator in the number basis chi_0 .. chi_{dim-1}.
class FockMatrix {
public:
    explicit FockMatrix(FockEntries entries) : entries_(std::move(entries))
    {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
            throw ConfigurationError("fock matrix must be square with dim >= 2");
        }
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] const FockEntries& entries() const { return entries_; }
    [[nodiscard]] std::complex<double> operator()(std::size_t r, std::size_t c) const
    {
        return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    [[nodiscard]] FockMatrix adjoint() const { return FockMatrix(entries_.adjoint()); }

    friend FockMatrix operator*(const FockMatrix& a, const FockMatrix& b)
    {
        return FockMatrix(a.entries_ * b.entries_);
    }
    friend FockMatrix operator+(const FockMatrix& a, const FockMatrix& b)
    {
        return FockMatrix(a.entries_ + b.entries_);
    }
    friend FockMatrix operator-(const FockMatrix& a, const FockMatrix& b)
    {
        return FockMatrix(a.entries_ - b.entries_);
    }
    friend FockMatrix operator*(std::complex<double> s, const FockMatrix& a)
    {
        return FockMatrix(s * a.entries_);
    }

private:
    FockEntries entries_;
};

/// Expansion coefficients <chi_n, psi> for n < dim.
class FockVector {
public:
    explicit FockVector(Eigen::VectorXcd coefficients) : coefficients_(std::move(coefficients)) {}

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(coefficients_.size()); }
    [[nodiscard]] const Eigen::VectorXcd& coefficients() const { return coefficients_; }
    [[nodiscard]] std::complex<double> operator[](std::size_t n) const
    {
        return coefficients_(static_cast<Eigen::Index>(n));
    }
    [[nodiscard]] double norm() const { return coefficients_.norm(); }

private:
    Eigen::VectorXcd coefficients_;
};

inline FockVector operator*(const FockMatrix& m, const FockVector& v)
{
    return FockVector(m.entries() * v.coefficients());
}

inline FockVector basis_vector(std::size_t n, std::size_t dim)
{
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    e(static_cast<Eigen::Index>(n)) = 1.0;
    return FockVector(std::move(e));
}

struct LadderMatrices {
    FockMatrix lowering;
    FockMatrix raising;
    FockMatrix number;
};

/// A has sqrt(n) at (n-1, n); Adag is its adjoint; N = Adag A.
inline LadderMatrices ladder_matrices(std::size_t dim)
{
    if (dim < 2) {
        throw ConfigurationError("fock dimension must be >= 2, got " + std::to_string(dim));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    FockEntries a = FockEntries::Zero(d, d);
    FockEntries n = FockEntries::Zero(d, d);
    for (Eigen::Index k = 1; k < d; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    // Stored as exact integers; the product Adag*A agrees up to the rounding
    // of sqrt(k)^2.
    for (Eigen::Index k = 0; k < d; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    FockEntries adag = a.adjoint();
    return {FockMatrix(std::move(a)), FockMatrix(std::move(adag)), FockMatrix(std::move(n))};
}

/// Smallest truncation that keeps the drift operator's low block converged.
inline std::size_t minimum_drift_dim(std::complex<double> alpha)
{
    return static_cast<std::size_t>(std::ceil(4.0 * std::norm(alpha) + 16.0));
}

/// exp(G) for anti-Hermitian G, via the eigendecomposition of the Hermitian
/// matrix iG: exp(G) = V exp(-i w) V^dagger. Exactly unitary up to roundoff.
inline FockEntries exp_anti_hermitian(const FockEntries& g)
{
    const FockEntries h = std::complex<double>(0.0, 1.0) * g;
    Eigen::SelfAdjointEigenSolver<FockEntries> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ConfigurationError("eigendecomposition of drift generator failed");
    }
    const auto& w = solver.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        phases(k) = std::polar(1.0, -w(k));
    }
    const auto& v = solver.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

/// Generic matrix exponential (Pade scaling and squaring).
inline FockEntries exp_general(const FockEntries& m) { return m.exp(); }

/// D(alpha) = exp(alpha Adag - conj(alpha) A) on the truncated number basis.
inline FockMatrix drift_matrix(std::complex<double> alpha, std::size_t dim)
{
    const std::size_t required = minimum_drift_dim(alpha);
    if (dim < required) {
        throw ConfigurationError("fock dimension " + std::to_string(dim)
                                 + " too small for |alpha| = " + std::to_string(std::abs(alpha))
                                 + "; need dim >= " + std::to_string(required));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    if (alpha == std::complex<double>(0.0, 0.0)) {
        return FockMatrix(FockEntries::Identity(d, d));
    }
    auto ladder = ladder_matrices(dim);
    FockEntries gen = alpha * ladder.raising.entries() - std::conj(alpha) * ladder.lowering.entries();
    return FockMatrix(exp_anti_hermitian(gen));
}

/// Frobenius norm of the upper-left dim/2 x dim/2 block, where truncation
/// artifacts from the top rows and columns have not reached.
inline double lower_block_norm(const FockEntries& m)
{
    const Eigen::Index half = m.rows() / 2;
    return m.topLeftCorner(half, half).norm();
}

/// ||D(alpha) D(beta) - exp((alpha conj(beta) - conj(alpha) beta)/2) D(alpha + beta)||
/// on the low block.
inline double group_law_check(std::complex<double> alpha, std::complex<double> beta,
                              std::size_t dim)
{
    auto da = drift_matrix(alpha, dim);
    auto db = drift_matrix(beta, dim);
    auto dab = drift_matrix(alpha + beta, dim);
    const std::complex<double> phase =
        std::exp((alpha * std::conj(beta) - std::conj(alpha) * beta) / 2.0);
    return lower_block_norm((da * db).entries() - phase * dab.entries());
}

/// ||A D(alpha) - D(alpha) A - alpha D(alpha)|| on the low block.
inline double commutator_drift_check(std::complex<double> alpha, std::size_t dim)
{
    auto ladder = ladder_matrices(dim);
    auto d = drift_matrix(alpha, dim);
    const FockEntries& a = ladder.lowering.entries();
    return lower_block_norm(a * d.entries() - d.entries() * a - alpha * d.entries());
}

/// Coefficients (c_A, c_Adag) of c_A * A + c_Adag * Adag.
using LadderCombination = std::pair<std::complex<double>, std::complex<double>>;

/// Low-block norm of exp(R) exp(S) - exp(R + S) exp([R,S]/2) for R, S linear
/// in A and Adag, where [R, S] = (r1 s2 - r2 s1) I is a scalar.
inline double hbc_check(LadderCombination r, LadderCombination s, std::size_t dim)
{
    auto ladder = ladder_matrices(dim);
    const FockEntries& a = ladder.lowering.entries();
    const FockEntries& adag = ladder.raising.entries();
    FockEntries rm = r.first * a + r.second * adag;
    FockEntries sm = s.first * a + s.second * adag;
    const std::complex<double> commutator = r.first * s.second - r.second * s.first;
    FockEntries lhs = exp_general(rm) * exp_general(sm);
    FockEntries rhs = std::exp(commutator / 2.0) * exp_general(rm + sm);
    return lower_block_norm(lhs - rhs);
}

/// <chi_n, psi_alpha> = alpha^n / sqrt(n!) exp(-|alpha|^2 / 2).
inline std::complex<double> number_coefficient(std::complex<double> alpha, std::size_t n)
{
    std::complex<double> c = std::exp(-std::norm(alpha) / 2.0);
    for (std::size_t k = 1; k <= n; ++k) {
        c *= alpha / std::sqrt(static_cast<double>(k));
    }
    return c;
}

} // namespace coherent
