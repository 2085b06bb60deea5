#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"
#include "coherent/fock.hpp"
#include "coherent/grid.hpp"
#include "coherent/operators.hpp"

namespace coherent {

/// alpha = x0 / (sqrt2 lambda) + i lambda p0 / (sqrt2 hbar)
inline cplx alpha_from_moments(double x0, double p0, const PhysicalConstants& c)
{
    return {x0 / (sqrt2 * c.lambda), c.lambda * p0 / (sqrt2 * c.hbar)};
}

inline double x0_from_alpha(cplx alpha, const PhysicalConstants& c)
{
    return sqrt2 * c.lambda * alpha.real();
}

inline double p0_from_alpha(cplx alpha, const PhysicalConstants& c)
{
    return sqrt2 * c.hbar * alpha.imag() / c.lambda;
}

/// Eigenvalue of A labelling a coherent state; equivalently its centroid (x0, p0).
struct CoherentLabel {
    cplx alpha;

    static CoherentLabel from_moments(double x0, double p0, const PhysicalConstants& c)
    {
        return {alpha_from_moments(x0, p0, c)};
    }
    [[nodiscard]] double x0(const PhysicalConstants& c) const { return x0_from_alpha(alpha, c); }
    [[nodiscard]] double p0(const PhysicalConstants& c) const { return p0_from_alpha(alpha, c); }
};

/// Closed-form overlap <psi_alpha, psi_beta>.
inline cplx overlap_closed_form(cplx alpha, cplx beta)
{
    return std::exp(-std::norm(alpha) / 2.0 - std::norm(beta) / 2.0 + std::conj(alpha) * beta);
}

/// Gaussians are kept this many widths away from the domain edges and from the
/// Nyquist momentum; exp(-10^2 / 4) is below the boundary threshold.
inline constexpr double containment_widths = 10.0;

namespace detail {

// psi_alpha(x) with the phase convention psi_alpha = D(alpha) psi_0:
//   (2 pi dx^2)^(-1/4) exp(-(x - x0)^2 / (4 dx^2) + i p0 (x - x0/2) / hbar)
inline cplx coherent_sample(double x, cplx alpha, const PhysicalConstants& c)
{
    const double delta = c.coherent_delta_x();
    const double x0 = x0_from_alpha(alpha, c);
    const double p0 = p0_from_alpha(alpha, c);
    const double u = x - x0;
    return std::polar(std::pow(2.0 * pi * delta * delta, -0.25)
                          * std::exp(-u * u / (4.0 * delta * delta)),
                      p0 * (x - 0.5 * x0) / c.hbar);
}

inline std::vector<cplx> coherent_samples(const Grid& g, cplx alpha, const PhysicalConstants& c)
{
    std::vector<cplx> out(g.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = coherent_sample(g.x(j), alpha, c);
    }
    return out;
}

inline void require_coherent_fits(const Grid& g, cplx alpha, const PhysicalConstants& c)
{
    c.validate();
    const double delta_x = c.coherent_delta_x();
    const double delta_p = c.coherent_delta_p();
    const double x0 = x0_from_alpha(alpha, c);
    const double p0 = p0_from_alpha(alpha, c);
    if (delta_x < 4.0 * g.dx()) {
        throw ConfigurationError("coherent state width " + std::to_string(delta_x)
                                 + " is resolved by fewer than 4 grid points; need dx <= "
                                 + std::to_string(delta_x / 4.0));
    }
    const double margin = containment_widths * delta_x;
    if (x0 - margin < g.x_min() || x0 + margin > g.x_max()) {
        throw ConfigurationError("coherent state at x0 = " + std::to_string(x0)
                                 + " escapes the grid; need the domain to cover ["
                                 + std::to_string(x0 - margin) + ", "
                                 + std::to_string(x0 + margin) + "]");
    }
    if (std::abs(p0) + containment_widths * delta_p > g.momentum_max(c.hbar)) {
        throw ConfigurationError("coherent state momentum p0 = " + std::to_string(p0)
                                 + " exceeds the grid momentum range "
                                 + std::to_string(g.momentum_max(c.hbar)));
    }
}

} // namespace detail

/// Gaussian closed form of psi_alpha on the grid.
inline WaveFunction coherent_closed_form(const GridPtr& grid, CoherentLabel label,
                                         const PhysicalConstants& c)
{
    detail::require_coherent_fits(*grid, label.alpha, c);
    return {grid, detail::coherent_samples(*grid, label.alpha, c)};
}

/// RK4 substeps per grid cell used by coherent_via_ode.
inline constexpr int ode_substeps = 16;

/// Integrates d psi / dy = 2 (alpha - y) psi, y = x / (sqrt2 lambda), outward
/// from the grid point nearest x0, then normalizes and fixes the global phase
/// to the D(alpha) psi_0 convention at that point.
inline WaveFunction coherent_via_ode(const GridPtr& grid, CoherentLabel label,
                                     const PhysicalConstants& c)
{
    const Grid& g = *grid;
    detail::require_coherent_fits(g, label.alpha, c);
    const cplx alpha = label.alpha;
    const double x0 = label.x0(c);
    const double p0 = label.p0(c);
    const double y_scale = 1.0 / (sqrt2 * c.lambda);
    const double h = g.dx() * y_scale / ode_substeps;
    auto rhs = [alpha](double y, cplx psi) { return 2.0 * (alpha - y) * psi; };
    auto rk4_cell = [&](double y, cplx psi, double step) {
        for (int s = 0; s < ode_substeps; ++s) {
            const cplx k1 = rhs(y, psi);
            const cplx k2 = rhs(y + 0.5 * step, psi + 0.5 * step * k1);
            const cplx k3 = rhs(y + 0.5 * step, psi + 0.5 * step * k2);
            const cplx k4 = rhs(y + step, psi + step * k3);
            psi += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            y += step;
        }
        return psi;
    };

    const std::size_t n = g.size();
    auto start = static_cast<std::size_t>(
        std::clamp(std::lround((x0 - g.x_min()) / g.dx()), 0L, static_cast<long>(n) - 1));
    std::vector<cplx> psi(n);
    psi[start] = 1.0;
    for (std::size_t j = start; j + 1 < n; ++j) {
        psi[j + 1] = rk4_cell(g.x(j) * y_scale, psi[j], h);
    }
    for (std::size_t j = start; j > 0; --j) {
        psi[j - 1] = rk4_cell(g.x(j) * y_scale, psi[j], -h);
    }

    WaveFunction raw(grid, std::move(psi));
    const double norm = raw.norm();
    const double target_phase = p0 * (g.x(start) - 0.5 * x0) / c.hbar;
    const cplx fix = std::polar(1.0 / norm, target_phase - std::arg(raw[start]));
    return fix * raw;
}

inline constexpr std::size_t max_number_state = 64;

namespace detail {

inline void require_number_state_fits(const Grid& g, std::size_t n, const PhysicalConstants& c)
{
    c.validate();
    if (n > max_number_state) {
        throw ConfigurationError("number state index " + std::to_string(n)
                                 + " exceeds the supported maximum "
                                 + std::to_string(max_number_state));
    }
    // Classical turning point sqrt(2n+1) in units of lambda (and hbar/lambda),
    // plus a fixed decay margin.
    const double reach = std::sqrt(2.0 * static_cast<double>(n) + 1.0) + 6.0;
    const double x_reach = reach * c.lambda;
    if (g.x_min() > -x_reach || g.x_max() < x_reach) {
        throw ConfigurationError("number state " + std::to_string(n)
                                 + " needs the domain to cover [" + std::to_string(-x_reach)
                                 + ", " + std::to_string(x_reach) + "]");
    }
    const double p_reach = reach * c.hbar / c.lambda;
    if (p_reach > g.momentum_max(c.hbar)) {
        throw ConfigurationError("number state " + std::to_string(n)
                                 + " is under-resolved; need dx <= "
                                 + std::to_string(pi * c.hbar / p_reach));
    }
}

} // namespace detail

/// chi_0 .. chi_{count-1}: Hermite functions of x / lambda from the weighted
/// three-term recurrence
///   chi_{k+1} = sqrt(2/(k+1)) xi chi_k - sqrt(k/(k+1)) chi_{k-1}.
inline std::vector<WaveFunction> number_states(const GridPtr& grid, std::size_t count,
                                               const PhysicalConstants& c)
{
    if (count == 0) {
        return {};
    }
    detail::require_number_state_fits(*grid, count - 1, c);
    const Grid& g = *grid;
    const std::size_t npts = g.size();
    std::vector<std::vector<double>> rows(count, std::vector<double>(npts));
    const double norm0 = std::pow(pi, -0.25) / std::sqrt(c.lambda);
    for (std::size_t j = 0; j < npts; ++j) {
        const double xi = g.x(j) / c.lambda;
        rows[0][j] = norm0 * std::exp(-0.5 * xi * xi);
        if (count > 1) {
            rows[1][j] = sqrt2 * xi * rows[0][j];
        }
        for (std::size_t k = 1; k + 1 < count; ++k) {
            const double kd = static_cast<double>(k);
            rows[k + 1][j] = std::sqrt(2.0 / (kd + 1.0)) * xi * rows[k][j]
                             - std::sqrt(kd / (kd + 1.0)) * rows[k - 1][j];
        }
    }
    std::vector<WaveFunction> out;
    out.reserve(count);
    for (auto& row : rows) {
        out.emplace_back(grid, std::vector<cplx>(row.begin(), row.end()));
    }
    return out;
}

inline WaveFunction number_state(const GridPtr& grid, std::size_t n, const PhysicalConstants& c)
{
    return std::move(number_states(grid, n + 1, c).back());
}

/// Poisson tail sum_{n >= n_max} |alpha|^{2n} exp(-|alpha|^2) / n!: the squared
/// norm of what a truncated series leaves out.
inline double poisson_tail(cplx alpha, std::size_t n_max)
{
    const double mean = std::norm(alpha);
    if (mean == 0.0) {
        return n_max == 0 ? 1.0 : 0.0;
    }
    double tail = 0.0;
    const double log_mean = std::log(mean);
    for (std::size_t n = n_max; n < n_max + 1000; ++n) {
        const double nd = static_cast<double>(n);
        const double term = std::exp(-mean + nd * log_mean - std::lgamma(nd + 1.0));
        tail += term;
        if (nd > mean && term < 1e-30 * std::max(tail, 1e-300)) {
            break;
        }
    }
    return tail;
}

/// Largest tolerated poisson_tail, i.e. a series norm error of 1e-8.
inline constexpr double series_tail_tolerance = 1e-16;

/// Terms used by default for the number-state series of psi_alpha: at least
/// 4|alpha|^2 + 16, extended until the omitted norm is below 1e-12, and capped
/// by the number states the grid constructors support.
inline std::size_t default_series_terms(cplx alpha)
{
    std::size_t n = minimum_drift_dim(alpha);
    while (n < max_number_state + 1 && poisson_tail(alpha, n) > 1e-24) {
        ++n;
    }
    return n;
}

/// sum_{n < n_max} <chi_n, psi_alpha> chi_n
inline WaveFunction coherent_via_number_series(const GridPtr& grid, CoherentLabel label,
                                               std::size_t n_max, const PhysicalConstants& c)
{
    detail::require_coherent_fits(*grid, label.alpha, c);
    if (n_max == 0 || poisson_tail(label.alpha, n_max) > series_tail_tolerance) {
        std::size_t need = 1;
        while (poisson_tail(label.alpha, need) > series_tail_tolerance) {
            ++need;
        }
        throw ConfigurationError("series with " + std::to_string(n_max)
                                 + " terms is too short for |alpha| = "
                                 + std::to_string(std::abs(label.alpha)) + "; need n_max >= "
                                 + std::to_string(need));
    }
    if (n_max > max_number_state + 1) {
        throw ConfigurationError("series needs " + std::to_string(n_max)
                                 + " number states; at most "
                                 + std::to_string(max_number_state + 1) + " are supported");
    }
    auto chi = number_states(grid, n_max, c);
    std::vector<cplx> sum(grid->size());
    for (std::size_t n = 0; n < n_max; ++n) {
        const cplx coeff = number_coefficient(label.alpha, n);
        auto s = chi[n].samples();
        for (std::size_t j = 0; j < sum.size(); ++j) {
            sum[j] += coeff * s[j];
        }
    }
    return {grid, std::move(sum)};
}

/// D(alpha) on the grid, with alpha = alpha(x0, p0):
///   exp(-i x0 p0 / 2hbar) exp(i p0 X / hbar) exp(-i x0 P / hbar).
inline WaveFunction apply_drift_grid(const WaveFunction& f, double x0, double p0,
                                     const PhysicalConstants& c)
{
    auto translated = spectral_multiply(f, [x0](double k) { return std::polar(1.0, -k * x0); });
    auto x = f.grid()->positions();
    const double scalar_phase = -x0 * p0 / (2.0 * c.hbar);
    std::vector<cplx> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::polar(1.0, p0 * x[j] / c.hbar + scalar_phase) * translated[j];
    }
    WaveFunction result(f.grid(), std::move(out));
    if (!is_contained(result)) {
        throw ConfigurationError("drift by (x0 = " + std::to_string(x0) + ", p0 = "
                                 + std::to_string(p0)
                                 + ") pushes the state into the grid boundary zone");
    }
    return result;
}

/// Measured coefficients <chi_n, f> for n < count.
inline FockVector fock_expansion(const WaveFunction& f, std::size_t count,
                                 const PhysicalConstants& c)
{
    auto chi = number_states(f.grid(), count, c);
    Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(count));
    for (std::size_t n = 0; n < count; ++n) {
        coeffs(static_cast<Eigen::Index>(n)) = inner_product(chi[n], f);
    }
    return FockVector(std::move(coeffs));
}

} // namespace coherent
