#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coherent/operators.hpp"
#include "coherent/states.hpp"

using coherent::cplx;
using coherent::Operator;

namespace {

constexpr double pi = std::numbers::pi;

// Independent closed form for hbar = m = lambda = 1: dx^2 = 1/2, x0 = sqrt2 Re a,
// p0 = sqrt2 Im a, psi = pi^{-1/4} exp(-(x-x0)^2/2 + i p0 (x - x0/2)).
cplx oracle_coherent(double x, cplx a)
{
    const double x0 = std::numbers::sqrt2 * a.real();
    const double p0 = std::numbers::sqrt2 * a.imag();
    return std::pow(pi, -0.25) * std::exp(cplx(-(x - x0) * (x - x0) / 2.0, p0 * (x - x0 / 2.0)));
}

coherent::WaveFunction sampled(const coherent::GridPtr& g, auto&& f)
{
    std::vector<cplx> v(g->size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = f(g->x(j));
    }
    return {g, std::move(v)};
}

} // namespace

TEST(States, LabelRoundTrip)
{
    coherent::PhysicalConstants c{0.5, 2.0, 1.5};
    auto l = coherent::CoherentLabel::from_moments(1.25, -0.75, c);
    EXPECT_NEAR(l.x0(c), 1.25, 1e-14);
    EXPECT_NEAR(l.p0(c), -0.75, 1e-14);
    EXPECT_NEAR(l.alpha.real(), 1.25 / (std::numbers::sqrt2 * 1.5), 1e-14);
    EXPECT_NEAR(l.alpha.imag(), 1.5 * -0.75 / (std::numbers::sqrt2 * 0.5), 1e-14);
}

TEST(States, ClosedFormMatchesOracle)
{
    auto g = coherent::default_grid();
    const cplx a(0.8, -1.3);
    auto psi = coherent::coherent_closed_form(g, {a}, {});
    auto ref = sampled(g, [&](double x) { return oracle_coherent(x, a); });
    EXPECT_LT((psi - ref).norm(), 1e-14);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-13);
}

TEST(States, ConstructorsAgree)
{
    auto g = coherent::default_grid();
    coherent::PhysicalConstants c{0.7, 1.0, 1.3};
    for (cplx a : {cplx(0.0, 0.0), cplx(1.0, -0.5), cplx(-1.5, 1.0)}) {
        auto closed = coherent::coherent_closed_form(g, {a}, c);
        auto ode = coherent::coherent_via_ode(g, {a}, c);
        auto series = coherent::coherent_via_number_series(g, {a}, coherent::default_series_terms(a), c);
        EXPECT_LT((ode - closed).norm(), 1e-8) << a;
        EXPECT_LT((series - closed).norm(), 1e-6) << a;
        EXPECT_LT((coherent::apply(Operator::A, closed, c) - a * closed).norm(), 1e-8);
    }
}

TEST(States, SeriesReportsRequiredLength)
{
    auto g = coherent::default_grid();
    try {
        coherent::coherent_via_number_series(g, {cplx(2.0, 0.0)}, 10, {});
        FAIL() << "expected ConfigurationError";
    } catch (const coherent::ConfigurationError& e) {
        EXPECT_NE(std::string(e.what()).find("need n_max >= "), std::string::npos) << e.what();
    }
}

TEST(States, CoherentMustFitGrid)
{
    auto g = coherent::make_grid(256, -5.0, 5.0);
    EXPECT_THROW(coherent::coherent_closed_form(g, {cplx(3.0, 0.0)}, {}), coherent::ConfigurationError);
    // Width below four grid spacings.
    auto coarse = coherent::make_grid(16, -20.0, 20.0);
    EXPECT_THROW(coherent::coherent_closed_form(coarse, {cplx(0.0, 0.0)}, {}),
                 coherent::ConfigurationError);
}

TEST(States, FirstExcitedStateVariance)
{
    // Oracle: chi_1 = sqrt2 pi^{-1/4} x exp(-x^2/2); <X^2> = 3/2, integrated
    // independently with composite Simpson on a fine mesh.
    const std::size_t m = 20000;
    const double a = -20.0;
    const double b = 20.0;
    const double h = (b - a) / double(m);
    double integral = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double x = a + h * double(k);
        const double chi = std::sqrt(2.0) * std::pow(pi, -0.25) * x * std::exp(-x * x / 2.0);
        const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        integral += w * x * x * chi * chi;
    }
    integral *= h / 3.0;
    EXPECT_NEAR(integral, 1.5, 1e-12);

    auto chi1 = coherent::number_state(coherent::default_grid(), 1, {});
    auto mo = coherent::moments(chi1, {});
    EXPECT_NEAR(mo.delta_x * mo.delta_x, integral, 1e-10);
}

TEST(States, NumberStatesMatchHermiteOracle)
{
    // chi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2), H from std::hermite.
    auto g = coherent::default_grid();
    auto chi = coherent::number_states(g, 12, {});
    for (unsigned n = 0; n < 12; ++n) {
        const double norm = 1.0 / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(pi));
        auto ref = sampled(g, [&](double x) { return norm * std::hermite(n, x) * std::exp(-x * x / 2.0); });
        EXPECT_LT((chi[n] - ref).norm(), 1e-12) << "n = " << n;
    }
}

TEST(States, NumberStatesOrthonormalAndEigen)
{
    auto g = coherent::default_grid();
    coherent::PhysicalConstants c{1.0, 1.0, 1.4};
    auto chi = coherent::number_states(g, 30, c);
    for (std::size_t n = 0; n < chi.size(); ++n) {
        for (std::size_t m = 0; m < chi.size(); ++m) {
            EXPECT_NEAR(std::abs(coherent::inner_product(chi[n], chi[m])), n == m ? 1.0 : 0.0, 1e-12);
        }
        auto nf = coherent::apply(Operator::Adag, Operator::A, chi[n], c);
        EXPECT_LT((nf - double(n) * chi[n]).norm(), 1e-8) << "n = " << n;
    }
}

TEST(States, NumberStateLimits)
{
    auto g = coherent::default_grid();
    EXPECT_THROW(coherent::number_state(g, coherent::max_number_state + 1, {}),
                 coherent::ConfigurationError);
    auto small = coherent::make_grid(256, -6.0, 6.0);
    EXPECT_THROW(coherent::number_state(small, 30, {}), coherent::ConfigurationError);
}

TEST(States, ExpansionCoefficients)
{
    auto g = coherent::default_grid();
    const cplx a(1.0, 0.0);
    auto coeffs = coherent::fock_expansion(coherent::coherent_closed_form(g, {a}, {}), 21, {});
    double total = 0.0;
    for (unsigned n = 0; n <= 20; ++n) {
        const double expected = std::exp(-0.5) / std::sqrt(std::tgamma(n + 1.0));
        EXPECT_NEAR(std::abs(coeffs[n] - expected), 0.0, 1e-8) << "n = " << n;
        total += std::norm(coeffs[n]);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(States, OverlapIncludesPhase)
{
    auto g = coherent::default_grid();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        const cplx a(u(rng), u(rng));
        const cplx b(u(rng), u(rng));
        const cplx measured = coherent::inner_product(coherent::coherent_closed_form(g, {a}, {}),
                                                      coherent::coherent_closed_form(g, {b}, {}));
        const cplx oracle = std::exp(-std::norm(a) / 2.0 - std::norm(b) / 2.0 + std::conj(a) * b);
        EXPECT_LT(std::abs(measured - oracle), 1e-8);
    }
}

TEST(States, DriftOnGrid)
{
    auto g = coherent::default_grid();
    coherent::PhysicalConstants c{1.3, 1.0, 0.9};
    auto vacuum = coherent::coherent_closed_form(g, {cplx(0.0, 0.0)}, c);
    const cplx a(-1.2, 0.7);
    coherent::CoherentLabel l{a};
    auto moved = coherent::apply_drift_grid(vacuum, l.x0(c), l.p0(c), c);
    EXPECT_LT((moved - coherent::coherent_closed_form(g, l, c)).norm(), 1e-8);

    // Unbiased relabelling: D(beta - alpha) psi_alpha = psi_beta up to the group-law phase.
    const cplx b(0.9, -1.5);
    coherent::CoherentLabel shift{b - a};
    auto relabelled = coherent::apply_drift_grid(moved, shift.x0(c), shift.p0(c), c);
    const cplx phase = std::exp(((b - a) * std::conj(a) - std::conj(b - a) * a) / 2.0);
    EXPECT_LT((relabelled - phase * coherent::coherent_closed_form(g, {b}, c)).norm(), 1e-8);
}

TEST(States, DriftIntoBoundaryIsRejected)
{
    auto g = coherent::default_grid();
    auto vacuum = coherent::coherent_closed_form(g, {cplx(0.0, 0.0)}, {});
    EXPECT_THROW(coherent::apply_drift_grid(vacuum, 18.0, 0.0, {}), coherent::ConfigurationError);
}

TEST(States, UncertaintyFloorOnRandomGaussians)
{
    // Chirped, displaced Gaussians: Delta_x Delta_p >= hbar/2 with equality iff
    // unchirped; the Schroedinger-Robertson form is saturated by all of them.
    auto g = coherent::default_grid();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::uniform_real_distribution<double> chirp(-0.5, 0.5);
    const double hbar = 0.8;
    coherent::PhysicalConstants c{hbar, 1.0, 1.0};
    for (int k = 0; k < 100; ++k) {
        const double s = width(rng);
        const double x0 = center(rng);
        const double p0 = center(rng);
        const double q = chirp(rng);
        auto f = sampled(g, [&](double x) {
                     const double y = x - x0;
                     return std::exp(cplx(-y * y / (4.0 * s * s), (p0 * x + q * y * y) / hbar));
                 }).normalized();
        auto m = coherent::moments(f, c);
        EXPECT_GE(m.uncertainty_product(), hbar / 2.0 - 1e-10);
        const double robertson = std::pow(m.delta_x * m.delta_p, 2) - std::pow(m.sym_covariance / 2.0, 2);
        EXPECT_NEAR(robertson, hbar * hbar / 4.0, 1e-8);
    }
}

TEST(States, AdjointHasNoEigenvectors)
{
    auto g = coherent::default_grid();
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 50; ++k) {
        // Random superposition of the first 12 number states.
        auto chi = coherent::number_states(g, 12, {});
        auto f = coherent::WaveFunction::zero(g);
        for (const auto& basis : chi) {
            f = f + cplx(gauss(rng), gauss(rng)) * basis;
        }
        f = f.normalized();
        EXPECT_GE(coherent::adjoint_eigen_residual(f, {}), 1.0 - 1e-6);
    }
    auto psi = coherent::coherent_closed_form(g, {cplx(0.4, 1.1)}, {});
    EXPECT_NEAR(coherent::adjoint_eigen_residual(psi, {}), 1.0, 1e-6);
}

TEST(States, PoissonTail)
{
    EXPECT_NEAR(coherent::poisson_tail({1.0, 0.0}, 1), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_LT(coherent::poisson_tail({1.0, 0.0}, 30), 1e-30);
    EXPECT_GE(coherent::default_series_terms({2.0, 0.0}), coherent::minimum_drift_dim({2.0, 0.0}));
}

TEST(States, AdjointResidualOfNumberState)
{
    // Oracle: min ||(A† - beta) f||^2 = <A†A> + 1 - |<A>|^2, which is n + 1 for chi_n.
    auto chi2 = coherent::number_state(coherent::default_grid(), 2, {});
    EXPECT_NEAR(coherent::adjoint_eigen_residual(chi2, {}), std::sqrt(3.0), 1e-10);
}
