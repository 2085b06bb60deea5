#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"
#include "coherent/grid.hpp"

namespace coherent {

enum class Operator { X, P, A, Adag, H };

inline const char* to_string(Operator op)
{
    switch (op) {
    case Operator::X: return "X";
    case Operator::P: return "P";
    case Operator::A: return "A";
    case Operator::Adag: return "Adag";
    case Operator::H: return "H";
    }
    return "?";
}

namespace detail {

inline WaveFunction multiply_by_position(const WaveFunction& f)
{
    auto x = f.grid()->positions();
    std::vector<cplx> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = x[j] * f[j];
    }
    return {f.grid(), std::move(out)};
}

inline WaveFunction momentum_action(const WaveFunction& f, double hbar)
{
    return spectral_multiply(f, [hbar](double k) { return cplx(hbar * k, 0.0); });
}

// a*X f + b*P f without materializing the two terms separately.
inline WaveFunction combine_x_p(const WaveFunction& f, cplx a, cplx b, double hbar)
{
    auto pf = momentum_action(f, hbar);
    auto x = f.grid()->positions();
    std::vector<cplx> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = a * x[j] * f[j] + b * pf[j];
    }
    return {f.grid(), std::move(out)};
}

} // namespace detail

/// Applies X (pointwise), P (spectral), the ladder operators
///   A    = X / (lambda sqrt2) + i lambda P / (hbar sqrt2)
///   Adag = X / (lambda sqrt2) - i lambda P / (hbar sqrt2)
/// or the free Hamiltonian H = P^2 / 2m.
inline WaveFunction apply(Operator op, const WaveFunction& f, const PhysicalConstants& c)
{
    const double ax = 1.0 / (c.lambda * sqrt2);
    const double ap = c.lambda / (c.hbar * sqrt2);
    switch (op) {
    case Operator::X: return detail::multiply_by_position(f);
    case Operator::P: return detail::momentum_action(f, c.hbar);
    case Operator::A: return detail::combine_x_p(f, ax, cplx(0.0, ap), c.hbar);
    case Operator::Adag: return detail::combine_x_p(f, ax, cplx(0.0, -ap), c.hbar);
    case Operator::H: {
        const double scale = c.hbar * c.hbar / (2.0 * c.mass);
        return spectral_multiply(f, [scale](double k) { return cplx(scale * k * k, 0.0); });
    }
    }
    throw UsageError("unknown operator");
}

struct AppliedState {
    WaveFunction state;
    /// Input or output has non-negligible amplitude in a boundary zone, so the
    /// continuum identities are not guaranteed.
    bool boundary_warning = false;
};

inline AppliedState apply_checked(Operator op, const WaveFunction& f, const PhysicalConstants& c)
{
    auto out = apply(op, f, c);
    bool warn = !is_contained(f) || !is_contained(out);
    return {std::move(out), warn};
}

/// Applies op1 after op2 (i.e. op1 * op2 acting on f).
inline WaveFunction apply(Operator op1, Operator op2, const WaveFunction& f,
                          const PhysicalConstants& c)
{
    return apply(op1, apply(op2, f, c), c);
}

struct MomentReport {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double mean_x2 = 0.0;
    double mean_p2 = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    /// <XP + PX> - 2 <X><P>
    double sym_covariance = 0.0;

    [[nodiscard]] double uncertainty_product() const { return delta_x * delta_p; }
};

inline constexpr double normalization_tolerance = 1e-6;

inline void require_normalized(const WaveFunction& f, const char* what)
{
    double n = f.norm();
    if (!(std::abs(n - 1.0) <= normalization_tolerance)) {
        throw UsageError(std::string(what) + ": input is not normalized (norm = "
                         + std::to_string(n) + ")");
    }
}

inline MomentReport moments(const WaveFunction& f, const PhysicalConstants& c)
{
    require_normalized(f, "moments");
    auto xf = apply(Operator::X, f, c);
    auto pf = apply(Operator::P, f, c);
    auto xpf = apply(Operator::X, pf, c);
    auto pxf = apply(Operator::P, xf, c);

    MomentReport m;
    m.mean_x = inner_product(f, xf).real();
    m.mean_p = inner_product(f, pf).real();
    m.mean_x2 = inner_product(xf, xf).real();
    m.mean_p2 = inner_product(pf, pf).real();
    m.delta_x = std::sqrt(std::max(0.0, m.mean_x2 - m.mean_x * m.mean_x));
    m.delta_p = std::sqrt(std::max(0.0, m.mean_p2 - m.mean_p * m.mean_p));
    m.sym_covariance = (inner_product(f, xpf) + inner_product(f, pxf)).real()
                       - 2.0 * m.mean_x * m.mean_p;
    return m;
}

/// min over beta of ||(op - beta) f|| / ||f||. The minimizer is the Rayleigh
/// quotient beta = <f, op f> / <f, f>, so no search is needed.
inline double min_eigen_residual(Operator op, const WaveFunction& f, const PhysicalConstants& c)
{
    auto of = apply(op, f, c);
    const double nn = inner_product(f, f).real();
    const cplx beta = inner_product(f, of) / nn;
    return (of - beta * f).norm() / std::sqrt(nn);
}

/// Distance of f from being an eigenvector of Adag. Never below 1 for a
/// normalized state: ||(Adag - beta) f||^2 >= <Adag A> + 1 - |<A>|^2 >= 1.
inline double adjoint_eigen_residual(const WaveFunction& f, const PhysicalConstants& c)
{
    return min_eigen_residual(Operator::Adag, f, c);
}

} // namespace coherent
