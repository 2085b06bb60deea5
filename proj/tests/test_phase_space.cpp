#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "coherent/phase_space.hpp"

using coherent::cplx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quadrature, TwoPointGaussLegendre)
{
    auto rule = coherent::gauss_legendre(2, -1.0, 1.0);
    EXPECT_NEAR(rule.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(rule.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(rule.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(rule.weights[1], 1.0, 1e-15);
}

TEST(Quadrature, ExactForPolynomials)
{
    // n nodes integrate degree 2n - 1 exactly.
    auto rule = coherent::gauss_legendre(6, 0.0, 2.0);
    for (int d = 0; d <= 11; ++d) {
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            s += rule.weights[k] * std::pow(rule.nodes[k], d);
        }
        EXPECT_NEAR(s, std::pow(2.0, d + 1) / (d + 1), 1e-12 * std::pow(2.0, d + 1));
    }
}

TEST(Quadrature, DiskArea)
{
    coherent::PolarQuadrature q(3.0, 8, 16, {1.0, -2.0});
    double area = 0.0;
    for (const auto& node : q.nodes()) {
        area += node.weight;
        EXPECT_LE(std::abs(node.alpha - cplx(1.0, -2.0)), 3.0);
    }
    EXPECT_NEAR(area, 9.0 * pi, 1e-12);
    EXPECT_THROW(coherent::PolarQuadrature(0.0, 8, 8), coherent::ConfigurationError);
    EXPECT_THROW(coherent::PolarQuadrature(1.0, 0, 8), coherent::ConfigurationError);
}

TEST(PhaseSpace, DiskMoments)
{
    auto q = coherent::default_quadrature();
    for (std::size_t n = 0; n < 8; ++n) {
        const double scale = pi * std::tgamma(double(n) + 1.0);
        for (std::size_t m = 0; m < 8; ++m) {
            const double expected = n == m ? scale : 0.0;
            EXPECT_LT(std::abs(coherent::disk_moment(n, m, q) - expected) / scale, 1e-8);
        }
    }
}

TEST(PhaseSpace, ResolutionOfIdentity)
{
    auto g = coherent::default_grid();
    EXPECT_LT(coherent::completeness_residual(8, coherent::default_quadrature(), g, {}), 1e-6);
    // A disk of radius 2 misses a visible part of the tail.
    EXPECT_GT(coherent::completeness_residual(8, coherent::PolarQuadrature(2.0, 48, 64), g, {}), 1e-3);
}

TEST(PhaseSpace, NumberStateReconstruction)
{
    auto g = coherent::default_grid();
    auto q = coherent::default_quadrature();
    auto chi = coherent::number_states(g, 6, {});
    for (std::size_t n = 0; n < 6; ++n) {
        EXPECT_LT((coherent::reconstruct_number_state(n, q, g, {}) - chi[n]).norm(), 1e-6) << n;
    }
    EXPECT_THROW(coherent::reconstruct_number_state(3, coherent::PolarQuadrature(3.0, 32, 64), g, {}),
                 coherent::ConfigurationError);
    EXPECT_THROW(coherent::reconstruct_number_state(13, q, g, {}), coherent::ConfigurationError);
}

TEST(PhaseSpace, ExpectationRoutesAgree)
{
    auto g = coherent::default_grid();
    auto q = coherent::default_quadrature();
    const cplx beta(1.0, 1.0);
    auto psi = coherent::coherent_closed_form(g, {beta}, {});
    const std::vector<cplx> a2{0.0, 0.0, 1.0};
    auto r = coherent::expectation_of_A_function(psi, a2, q, {});
    EXPECT_LT(std::abs(r.direct - beta * beta), 1e-10);
    EXPECT_LT(std::abs(r.phase_space - beta * beta), 1e-6);

    auto chi2 = coherent::number_state(g, 2, {});
    const std::vector<cplx> one{1.0};
    EXPECT_LT(std::abs(coherent::expectation_of_A_function(chi2, one, q, {}).phase_space - 1.0), 1e-6);
    const std::vector<cplx> too_long(10, 1.0);
    EXPECT_THROW(coherent::expectation_of_A_function(chi2, too_long, q, {}), coherent::ConfigurationError);
}

TEST(PhaseSpace, HusimiOfCoherentState)
{
    auto g = coherent::default_grid();
    coherent::PhysicalConstants c{0.6, 1.0, 1.4};
    auto psi = coherent::coherent_closed_form(g, {cplx(0.5, -1.0)}, c);
    auto map = coherent::husimi(psi, coherent::default_lattice_for(psi, c));
    const auto& lat = map.lattice;
    EXPECT_NEAR(map(lat.n_x() / 2, lat.n_p() / 2), 1.0 / pi, 1e-6);
    EXPECT_NEAR(coherent::husimi_mass(map), 2.0 * c.hbar, 1e-4);
    EXPECT_GE(*std::min_element(map.values.begin(), map.values.end()), 0.0);
    EXPECT_FALSE(map.boundary_warning);

    // Oracle: rho = exp(-|alpha - alpha0|^2) / pi at every node.
    for (std::size_t i = 0; i < lat.n_x(); i += 17) {
        for (std::size_t j = 0; j < lat.n_p(); j += 13) {
            const double expected = std::exp(-std::norm(lat.alpha_at(i, j) - cplx(0.5, -1.0))) / pi;
            EXPECT_NEAR(map(i, j), expected, 1e-12);
        }
    }

    auto m = coherent::moments(psi, c);
    auto marg = coherent::husimi_marginals(map);
    auto sx = coherent::summarize_distribution(lat.x_axis(), marg.x);
    auto sp = coherent::summarize_distribution(lat.p_axis(), marg.p);
    EXPECT_NEAR(sx.mass, 1.0, 1e-4);
    EXPECT_NEAR(sx.variance, m.delta_x * m.delta_x + c.lambda * c.lambda / 2.0, 1e-4);
    const double dp0 = c.coherent_delta_p();
    EXPECT_NEAR(sp.variance, m.delta_p * m.delta_p + dp0 * dp0, 1e-4);
}

TEST(PhaseSpace, HusimiOfFirstNumberState)
{
    // Oracle: rho = |alpha|^2 exp(-|alpha|^2) / pi.
    auto g = coherent::default_grid();
    auto chi = coherent::number_state(g, 1, {});
    auto map = coherent::husimi(chi, coherent::default_lattice_for(chi, {}));
    const auto& lat = map.lattice;
    double worst = 0.0;
    for (std::size_t i = 0; i < lat.n_x(); ++i) {
        for (std::size_t j = 0; j < lat.n_p(); ++j) {
            const double a2 = std::norm(lat.alpha_at(i, j));
            worst = std::max(worst, std::abs(map(i, j) - a2 * std::exp(-a2) / pi));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(PhaseSpace, HusimiBorderWarning)
{
    auto g = coherent::default_grid();
    auto psi = coherent::coherent_closed_form(g, {cplx(0.0, 0.0)}, {});
    coherent::PhaseSpaceLattice tight(coherent::centered_axis(0.0, 1.0, 32),
                                      coherent::centered_axis(0.0, 1.0, 32), {});
    EXPECT_TRUE(coherent::husimi(psi, tight).boundary_warning);
}

TEST(PhaseSpace, HusimiIndependentOfThreads)
{
    auto g = coherent::default_grid();
    auto chi = coherent::number_state(g, 3, {});
    auto lat = coherent::default_lattice_for(chi, {}, 64);
    setenv("COHERENT_KIT_THREADS", "1", 1);
    auto one = coherent::husimi(chi, lat);
    setenv("COHERENT_KIT_THREADS", "5", 1);
    auto five = coherent::husimi(chi, lat);
    unsetenv("COHERENT_KIT_THREADS");
    EXPECT_EQ(one.values, five.values);
}

TEST(PhaseSpace, LatticeValidation)
{
    EXPECT_THROW(coherent::PhaseSpaceLattice({0.0}, {0.0, 1.0}, {}), coherent::ConfigurationError);
    EXPECT_THROW(coherent::PhaseSpaceLattice({0.0, 1.0, 3.0}, {0.0, 1.0}, {}),
                 coherent::ConfigurationError);
    EXPECT_THROW(coherent::centered_axis(0.0, -1.0, 8), coherent::ConfigurationError);
}
