#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "coherent/dynamics.hpp"
#include "coherent/fock.hpp"
#include "coherent/grid.hpp"
#include "coherent/operators.hpp"
#include "coherent/phase_space.hpp"
#include "coherent/quadrature.hpp"
#include "coherent/report.hpp"
#include "coherent/states.hpp"

namespace coherent {

struct VerifyConfig {
    GridPtr grid = default_grid();
    PhysicalConstants constants;
    std::size_t fock_dim = 64;
    std::size_t probe_dim = 8;
};

namespace detail {

inline double relative_gap(double measured, double expected)
{
    return std::abs(measured - expected) / std::max(std::abs(expected), 1e-300);
}

inline std::vector<cplx> verify_alphas()
{
    return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {-1.5, 0.5}, {0.0, 2.0}};
}

inline void add_fock_checks(VerificationReport& r, const VerifyConfig& cfg)
{
    const std::size_t dim = cfg.fock_dim;
    auto ladder = ladder_matrices(dim);
    const auto& a = ladder.lowering.entries();
    const auto& adag = ladder.raising.entries();
    const auto& n = ladder.number.entries();
    const auto d = static_cast<Eigen::Index>(dim);
    const FockEntries id = FockEntries::Identity(d, d);

    r.add("fock.ladder_commutator", "[A, A†] = I", lower_block_norm(a * adag - adag * a - id),
          1e-12);
    r.add("fock.number_is_adag_a", "Nχ_n = n χ_n", lower_block_norm(adag * a - n), 1e-12);
    r.add("fock.number_raising_commutator", "[N, A†] = A†",
          lower_block_norm(n * adag - adag * n - adag), 1e-12);

    const cplx alpha(1.0, 0.5);
    auto da = drift_matrix(alpha, dim);
    auto dm = drift_matrix(-alpha, dim);
    r.add("fock.drift_inverse", "D†(α) = D⁻¹(α) = D(−α)",
          std::max(lower_block_norm(da.adjoint().entries() - dm.entries()),
                   lower_block_norm((da.adjoint() * da).entries() - id)),
          1e-8);
    r.add("fock.group_law", "exp((αβ* − α*β)/2) D(α+β)",
          std::max(group_law_check({1.0, 0.0}, {0.0, 1.0}, dim),
                   group_law_check({0.5, -0.5}, {-1.0, 0.25}, dim)),
          1e-8);
    r.add("fock.drift_commutator", "[A, D(α)] = αD(α)",
          std::max(commutator_drift_check({1.0, 0.0}, dim), commutator_drift_check({0.0, 2.0}, dim)),
          1e-8);
    r.add("fock.hbc", "exp(R+S)exp([R,S]/2)",
          std::max(hbc_check({1.0, 0.0}, {0.0, 1.0}, dim),
                   hbc_check({cplx(0.3, 0.2), cplx(-0.1, 0.4)}, {cplx(-0.5, 0.0), cplx(0.2, 0.7)},
                             dim)),
          1e-8);
}

inline void add_state_checks(VerificationReport& r, const VerifyConfig& cfg)
{
    const auto& grid = cfg.grid;
    const auto& c = cfg.constants;
    const auto alphas = verify_alphas();

    double product = 0.0;
    double covariance = 0.0;
    double label = 0.0;
    double eigen_closed = 0.0;
    double eigen_ode = 0.0;
    double ode_gap = 0.0;
    double series_gap = 0.0;
    double drift_gap = 0.0;
    double adjoint_gap = 0.0;
    auto psi0 = coherent_closed_form(grid, {cplx(0.0, 0.0)}, c);
    for (cplx alpha : alphas) {
        auto psi = coherent_closed_form(grid, {alpha}, c);
        auto m = moments(psi, c);
        product = std::max(product, std::abs(m.uncertainty_product() - c.hbar / 2.0));
        covariance = std::max(covariance, std::abs(m.sym_covariance));
        label = std::max(label, std::abs(alpha_from_moments(m.mean_x, m.mean_p, c) - alpha));
        eigen_closed = std::max(eigen_closed, (apply(Operator::A, psi, c) - alpha * psi).norm());
        auto ode = coherent_via_ode(grid, {alpha}, c);
        eigen_ode = std::max(eigen_ode, (apply(Operator::A, ode, c) - alpha * ode).norm());
        ode_gap = std::max(ode_gap, (ode - psi).norm());
        auto series = coherent_via_number_series(grid, {alpha}, default_series_terms(alpha), c);
        series_gap = std::max(series_gap, (series - psi).norm());
        CoherentLabel l{alpha};
        drift_gap = std::max(drift_gap, (apply_drift_grid(psi0, l.x0(c), l.p0(c), c) - psi).norm());
        adjoint_gap = std::max(adjoint_gap, std::abs(adjoint_eigen_residual(psi, c) - 1.0));
    }
    r.add("states.minimal_uncertainty", "Δ_x Δ_p = ħ/2", product, 1e-8);
    r.add("states.zero_covariance", "⟨XP+PX⟩−2⟨X⟩⟨P⟩ =0", covariance, 1e-8);
    r.add("states.label_from_moments", "α = (1/√2λ)⟨X⟩ + i(λ/√2ħ)⟨P⟩", label, 1e-8);
    r.add("states.eigen_closed_form", "Aψα = αψα", eigen_closed, 1e-8);
    r.add("states.eigen_ode", "dψ_α(y)/dy = 2(α−y)ψ_α(y)", std::max(eigen_ode, ode_gap), 1e-8);
    r.add("states.series_agreement", "ψ_α = Σ_n αⁿ/√n! exp(−|α|²/2) χ_n", series_gap, 1e-6);
    r.add("states.drift_of_vacuum", "ψ_α = D(α)ψ_0", drift_gap, 1e-8);
    r.add("states.adjoint_floor", "Δ²_x = −λ²/2; a negative result!", adjoint_gap, 1e-6);

    // D(beta - alpha) psi_alpha = exp(((beta-alpha) alpha* - (beta-alpha)* alpha)/2) psi_beta
    {
        const cplx alpha(0.5, -1.0);
        const cplx beta(-1.0, 0.75);
        const cplx gamma = beta - alpha;
        CoherentLabel g{gamma};
        auto moved = apply_drift_grid(coherent_closed_form(grid, {alpha}, c), g.x0(c), g.p0(c), c);
        const cplx phase = std::exp((gamma * std::conj(alpha) - std::conj(gamma) * alpha) / 2.0);
        r.add("states.unbiased_drift", "an unbiased way ψ_β = D(β−α)ψ_α",
              (moved - phase * coherent_closed_form(grid, {beta}, c)).norm(), 1e-8);
    }

    {
        const std::array<std::pair<cplx, cplx>, 3> pairs{{
            {{0.0, 0.0}, {1.0, 0.0}},
            {{1.0, -0.5}, {-0.25, 1.5}},
            {{-1.2, 0.3}, {0.8, 0.9}},
        }};
        double gap = 0.0;
        for (const auto& [a, b] : pairs) {
            auto pa = coherent_closed_form(grid, {a}, c);
            auto pb = coherent_closed_form(grid, {b}, c);
            gap = std::max(gap, std::abs(inner_product(pa, pb) - overlap_closed_form(a, b)));
        }
        r.add("states.overlap", "exp(−|α|²/2 − |β|²/2 + α*β)", gap, 1e-8);
    }

    auto chi = number_states(grid, 21, c);
    {
        double low = 0.0;
        double high = 0.0;
        double num = 0.0;
        for (std::size_t n = 0; n + 1 < chi.size(); ++n) {
            const double nd = static_cast<double>(n);
            auto lowered = apply(Operator::A, chi[n], c);
            if (n > 0) {
                lowered = lowered - cplx(std::sqrt(nd), 0.0) * chi[n - 1];
            }
            low = std::max(low, lowered.norm());
            high = std::max(high, (apply(Operator::Adag, chi[n], c)
                                   - cplx(std::sqrt(nd + 1.0), 0.0) * chi[n + 1])
                                      .norm());
            num = std::max(num, (apply(Operator::Adag, Operator::A, chi[n], c) - cplx(nd, 0.0) * chi[n])
                                    .norm());
        }
        r.add("states.lowering_action", "Aχ_n = √n χ_{n−1}", low, 1e-8);
        r.add("states.raising_action", "A†χ_n = √(n+1) χ_{n+1}", high, 1e-8);
        r.add("states.number_eigen", "Nχ_n = n χ_n with n = 0, 1, 2", num, 1e-8);
        r.add("states.vacuum", "χ_0 = ψ_0", (chi[0] - psi0).norm(), 1e-10);
        r.add("states.ground_variance", "Δ²_x = λ²/2",
              std::abs(moments(chi[0], c).delta_x * moments(chi[0], c).delta_x
                       - c.lambda * c.lambda / 2.0),
              1e-8);

        // chi_n = (A†)^n chi_0 / sqrt(n!) by repeated application. Each spectral
        // step multiplies roundoff near the Nyquist momentum by ~p_max, so the
        // chain is kept short.
        double ladder_gap = 0.0;
        WaveFunction v = chi[0];
        for (std::size_t n = 1; n <= 4; ++n) {
            v = cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0) * apply(Operator::Adag, v, c);
            ladder_gap = std::max(ladder_gap, (v - chi[n]).norm());
        }
        r.add("states.raising_from_vacuum", "χ_n = (1/√n!)(A†)ⁿχ_0", ladder_gap, 1e-8);

        const cplx alpha(1.0, 0.0);
        auto psi = coherent_closed_form(grid, {alpha}, c);
        double coeff = 0.0;
        for (std::size_t n = 0; n < chi.size(); ++n) {
            coeff = std::max(coeff, std::abs(inner_product(chi[n], psi) - number_coefficient(alpha, n)));
        }
        r.add("states.number_coefficients", "⟨χ_n, ψ_α⟩ = αⁿ/√n! exp(−|α|²/2)", coeff, 1e-8);
    }
}

inline void add_dynamics_checks(VerificationReport& r, const VerifyConfig& cfg)
{
    const auto& grid = cfg.grid;
    const auto& c = cfg.constants;
    r.add("dynamics.commutator_series", "[H,A] = −iħ/(√2mλ) P",
          commutator_series_check(c, grid), 1e-6);

    const std::array<double, 4> times{0.25, 0.5, 1.0, 2.0};
    const CoherentLabel label{cplx(1.0, 1.0)};
    const CoherentLabel vacuum{cplx(0.0, 0.0)};
    auto psi = coherent_closed_form(grid, label, c);
    auto m0 = moments(psi, c);
    auto modulus0 = momentum_amplitudes(psi, c.hbar);

    double constrained = 0.0;
    double stated_gap = 0.0;
    double eigen_gap = 0.0;
    double modulus = 0.0;
    double centroid = 0.0;
    double spreading = 0.0;
    for (double t : times) {
        auto res = coherence_residual(label, t, c, grid);
        constrained = std::max(constrained, res.constrained);

        // The opposite-sign form misses by exactly 2 |t| ||P Psi|| / (sqrt2 m lambda).
        auto psi_t = evolve_free(psi, {t, c});
        const double predicted = 2.0 * std::abs(t) * apply(Operator::P, psi_t, c).norm()
                                 / (sqrt2 * c.mass * c.lambda);
        stated_gap = std::max(stated_gap, relative_gap(res.constrained_plus_sign, predicted));

        const double expected_eigen = t * c.hbar / (2.0 * c.mass * c.lambda * c.lambda);
        eigen_gap = std::max(eigen_gap,
                             std::abs(coherence_residual(vacuum, t, c, grid).eigen - expected_eigen));

        auto modulus_t = momentum_amplitudes(psi_t, c.hbar);
        for (std::size_t k = 0; k < modulus_t.size(); ++k) {
            modulus = std::max(modulus, std::abs(std::abs(modulus_t[k]) - std::abs(modulus0[k])));
        }
        auto mt = moments(psi_t, c);
        centroid = std::max({centroid, std::abs(mt.mean_x - (m0.mean_x + m0.mean_p * t / c.mass)),
                             std::abs(mt.mean_p - m0.mean_p)});
        spreading = std::max(spreading, relative_gap(mt.delta_x * mt.delta_x,
                                                     evolved_position_variance(m0, t, c.mass)));
    }
    r.add("dynamics.evolved_eigen_relation", "Ψ(t) = exp(−(i/ħ)Ht) ψ_α", constrained, 1e-7);
    r.add("dynamics.opposite_sign_violation", "(A + t/(√2mλ)P)Ψ(t) = αΨ(t)", stated_gap, 1e-7);
    r.add("dynamics.non_coherence", "increases with time", eigen_gap, 1e-6);
    r.add("dynamics.momentum_invariance", "momentum distribution is time independent", modulus,
          1e-12);
    r.add("dynamics.centroid_motion", "U_t = exp(−(i/ħ)Ht)", centroid, 1e-8);
    r.add("dynamics.spreading", "uncertainty product Δ_xΔ_p will also increase", spreading, 1e-8);
}

inline void add_phase_space_checks(VerificationReport& r, const VerifyConfig& cfg)
{
    const auto& grid = cfg.grid;
    const auto& c = cfg.constants;
    auto quad = default_quadrature();

    r.add("phase_space.completeness", "π^{−1}∫ d²α ψ_α⟨ψ_α, ·⟩ = I",
          completeness_residual(cfg.probe_dim, quad, grid, c), 1e-6);

    double moment_gap = 0.0;
    for (std::size_t n = 0; n < cfg.probe_dim; ++n) {
        const double scale = pi * std::tgamma(static_cast<double>(n) + 1.0);
        for (std::size_t m = 0; m < cfg.probe_dim; ++m) {
            const double expected = n == m ? scale : 0.0;
            moment_gap = std::max(moment_gap, std::abs(disk_moment(n, m, quad) - expected) / scale);
        }
    }
    r.add("phase_space.disk_moments", "π n! δ_{n,m}", moment_gap, 1e-8);

    auto chi = number_states(grid, 6, c);
    double inversion = 0.0;
    for (std::size_t n = 0; n < chi.size(); ++n) {
        inversion = std::max(inversion, (reconstruct_number_state(n, quad, grid, c) - chi[n]).norm());
    }
    r.add("phase_space.number_inversion", "α^{*n}/√n! exp(−|α|²/2) ψ_α", inversion, 1e-6);

    {
        const std::array<std::vector<cplx>, 3> polys{
            std::vector<cplx>{1.0},
            std::vector<cplx>{0.0, 1.0},
            std::vector<cplx>{0.0, 0.0, 1.0},
        };
        std::vector<WaveFunction> states{coherent_closed_form(grid, {cplx(1.0, 1.0)}, c), chi[0],
                                         chi[1], chi[2]};
        double gap = 0.0;
        for (const auto& s : states) {
            for (const auto& p : polys) {
                auto routes = expectation_of_A_function(s, p, quad, c);
                gap = std::max(gap, std::abs(routes.phase_space - routes.direct));
            }
        }
        r.add("phase_space.expectation_routes", "π^{−1}∫ d²α F(α) |⟨ψ_α, Ψ⟩|²", gap, 1e-6);
    }

    auto state = coherent_closed_form(grid, {cplx(0.5, -0.5)}, c);
    auto map = husimi(state, default_lattice_for(state, c));
    const std::size_t mid_x = map.lattice.n_x() / 2;
    const std::size_t mid_p = map.lattice.n_p() / 2;
    r.add("phase_space.husimi_peak", "ρ_H(x,p) = π^{−1}|⟨ψ_{α(x,p)}, Ψ⟩|²",
          std::abs(map(mid_x, mid_p) - 1.0 / pi), 1e-6);
    r.add("phase_space.husimi_mass", "known as the Husimi distribution",
          std::abs(husimi_mass(map) - 2.0 * c.hbar), 1e-4);
    r.add("phase_space.husimi_nonnegative", "everywhere nonnegative",
          std::max(0.0, -*std::min_element(map.values.begin(), map.values.end())), 0.0);

    auto m = moments(state, c);
    auto marginals = husimi_marginals(map);
    auto sx = summarize_distribution(map.lattice.x_axis(), marginals.x);
    r.add("phase_space.marginal_broadening", "does not provide the correct distribution",
          std::abs(sx.variance - (m.delta_x * m.delta_x + c.lambda * c.lambda / 2.0)), 1e-4);
}

} // namespace detail

/// Every invariant suite on one grid and set of constants.
inline VerificationReport run_verification(const VerifyConfig& cfg = {})
{
    cfg.constants.validate();
    VerificationReport r;
    detail::add_fock_checks(r, cfg);
    detail::add_state_checks(r, cfg);
    detail::add_dynamics_checks(r, cfg);
    detail::add_phase_space_checks(r, cfg);
    return r;
}

} // namespace coherent
