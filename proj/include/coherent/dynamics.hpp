#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"
#include "coherent/grid.hpp"
#include "coherent/operators.hpp"
#include "coherent/states.hpp"

namespace coherent {

struct EvolutionParams {
    double t = 0.0;
    PhysicalConstants constants;
};

/// Packet widths kept between the evolved centroid and the domain edges.
inline constexpr double evolution_margin_widths = 6.0;

/// Free-particle variance of X at time t from the moments at t = 0:
///   dx^2(t) = dx^2 + (t/m) cov + (t/m)^2 dp^2
inline double evolved_position_variance(const MomentReport& m, double t, double mass)
{
    const double s = t / mass;
    return m.delta_x * m.delta_x + s * m.sym_covariance + s * s * m.delta_p * m.delta_p;
}

/// Single exact spectral step: multiplies the momentum representation by
/// exp(-i p^2 t / (2 m hbar)).
inline WaveFunction evolve_free(const WaveFunction& f, const EvolutionParams& params)
{
    const PhysicalConstants& c = params.constants;
    c.validate();
    if (!std::isfinite(params.t)) {
        throw ConfigurationError("evolution time must be finite");
    }
    if (params.t == 0.0) {
        return f;
    }
    const Grid& g = *f.grid();
    auto m = moments(f.normalized(), c);
    const double center = m.mean_x + m.mean_p * params.t / c.mass;
    const double width = std::sqrt(std::max(0.0, evolved_position_variance(m, params.t, c.mass)));
    const double reach = evolution_margin_widths * width;
    if (center - reach < g.x_min() || center + reach > g.x_max()) {
        throw ConfigurationError("evolved packet (center " + std::to_string(center) + ", width "
                                 + std::to_string(width)
                                 + ") leaves the grid; need the domain to cover ["
                                 + std::to_string(center - reach) + ", "
                                 + std::to_string(center + reach) + "]");
    }
    const double phase_scale = -c.hbar * params.t / (2.0 * c.mass);
    return spectral_multiply(f, [phase_scale](double k) {
        return std::polar(1.0, phase_scale * k * k);
    });
}

struct CoherenceResidual {
    /// ||(A - t P / (sqrt2 m lambda) - alpha) Psi(t)||. Psi(t) = U psi_alpha is
    /// an eigenvector of U A U^dagger = A - t P / (sqrt2 m lambda), so this
    /// vanishes up to roundoff.
    double constrained = 0.0;
    /// ||(A + t P / (sqrt2 m lambda) - alpha) Psi(t)||, the same identity with
    /// the opposite sign of the P term. Equals 2 |t| ||P Psi|| / (sqrt2 m lambda)
    /// rather than zero.
    double constrained_plus_sign = 0.0;
    /// min over beta of ||(A - beta) Psi(t)||, positive for t != 0.
    double eigen = 0.0;
};

inline CoherenceResidual coherence_residual(CoherentLabel label, double t,
                                            const PhysicalConstants& c, const GridPtr& grid)
{
    auto psi0 = coherent_closed_form(grid, label, c);
    auto psi_t = evolve_free(psi0, {t, c});
    auto a_psi = apply(Operator::A, psi_t, c);
    auto p_psi = apply(Operator::P, psi_t, c);
    const double k = t / (sqrt2 * c.mass * c.lambda);
    auto shifted = a_psi - label.alpha * psi_t;
    return {(shifted - cplx(k, 0.0) * p_psi).norm(), (shifted + cplx(k, 0.0) * p_psi).norm(),
            min_eigen_residual(Operator::A, psi_t, c)};
}

/// Relative residuals of [H, A] f = -i hbar / (sqrt2 m lambda) P f and
/// [H, [H, A]] f = 0 for one test state; returns the larger.
inline double commutator_series_residual(const WaveFunction& f, const PhysicalConstants& c)
{
    auto af = apply(Operator::A, f, c);
    auto hf = apply(Operator::H, f, c);
    auto haf = apply(Operator::H, af, c);
    auto ahf = apply(Operator::A, hf, c);
    auto comm = haf - ahf;
    const cplx k(0.0, -c.hbar / (sqrt2 * c.mass * c.lambda));
    auto expected = k * apply(Operator::P, f, c);
    const double first = (comm - expected).norm() / expected.norm();

    // [H,[H,A]] = H^2 A - 2 H A H + A H^2
    auto hhaf = apply(Operator::H, haf, c);
    auto hahf = apply(Operator::H, ahf, c);
    auto ahhf = apply(Operator::A, apply(Operator::H, hf, c), c);
    auto double_comm = hhaf - cplx(2.0, 0.0) * hahf + ahhf;
    const double scale = std::max({hhaf.norm(), hahf.norm(), ahhf.norm()});
    const double second = double_comm.norm() / scale;
    return std::max(first, second);
}

/// Runs commutator_series_residual on psi_0, psi_1 (alpha = 1) and chi_3.
inline double commutator_series_check(const PhysicalConstants& c, const GridPtr& grid)
{
    std::vector<WaveFunction> probes{
        coherent_closed_form(grid, {cplx(0.0, 0.0)}, c),
        coherent_closed_form(grid, {cplx(1.0, 0.0)}, c),
        number_state(grid, 3, c),
    };
    double worst = 0.0;
    for (const auto& f : probes) {
        worst = std::max(worst, commutator_series_residual(f, c));
    }
    return worst;
}

struct TraceRow {
    double t = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    double eigen_residual = 0.0;
};

/// Moments and eigen residual at t_k = k t_final / steps, k = 0..steps.
inline std::vector<TraceRow> evolution_trace(const WaveFunction& f, double t_final,
                                             std::size_t steps, const PhysicalConstants& c)
{
    if (steps == 0) {
        throw ConfigurationError("evolution trace needs at least one step");
    }
    std::vector<TraceRow> rows(steps + 1);
    parallel_for(steps + 1, [&](std::size_t k) {
        const double t = t_final * static_cast<double>(k) / static_cast<double>(steps);
        auto psi = evolve_free(f, {t, c});
        auto m = moments(psi, c);
        rows[k] = {t, m.mean_x, m.mean_p, m.delta_x, m.delta_p,
                   min_eigen_residual(Operator::A, psi, c)};
    });
    return rows;
}

} // namespace coherent
