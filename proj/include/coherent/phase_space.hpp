#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"
#include "coherent/grid.hpp"
#include "coherent/operators.hpp"
#include "coherent/parallel.hpp"
#include "coherent/quadrature.hpp"
#include "coherent/states.hpp"

namespace coherent {

/// Rectangular (x, p) lattice with the chart
///   alpha(x, p) = x / (sqrt2 lambda) + i lambda p / (sqrt2 hbar),
/// under which d^2 alpha = dx dp / (2 hbar).
class PhaseSpaceLattice {
public:
    PhaseSpaceLattice(std::vector<double> x_axis, std::vector<double> p_axis,
                      PhysicalConstants constants)
        : x_axis_(std::move(x_axis)), p_axis_(std::move(p_axis)), constants_(constants)
    {
        constants_.validate();
        check_axis(x_axis_, "x");
        check_axis(p_axis_, "p");
    }

    [[nodiscard]] std::span<const double> x_axis() const { return x_axis_; }
    [[nodiscard]] std::span<const double> p_axis() const { return p_axis_; }
    [[nodiscard]] std::size_t n_x() const { return x_axis_.size(); }
    [[nodiscard]] std::size_t n_p() const { return p_axis_.size(); }
    [[nodiscard]] double dx() const { return x_axis_[1] - x_axis_[0]; }
    [[nodiscard]] double dp() const { return p_axis_[1] - p_axis_[0]; }
    [[nodiscard]] const PhysicalConstants& constants() const { return constants_; }

    [[nodiscard]] cplx alpha_at(std::size_t i, std::size_t j) const
    {
        return alpha_from_moments(x_axis_[i], p_axis_[j], constants_);
    }
    /// Area of one cell in the alpha plane.
    [[nodiscard]] double cell_measure() const { return dx() * dp() / (2.0 * constants_.hbar); }

private:
    static void check_axis(const std::vector<double>& axis, const char* name)
    {
        if (axis.size() < 2) {
            throw ConfigurationError(std::string(name) + " axis needs at least two nodes");
        }
        const double h = axis[1] - axis[0];
        if (!(h > 0.0)) {
            throw ConfigurationError(std::string(name) + " axis must be strictly increasing");
        }
        for (std::size_t k = 1; k < axis.size(); ++k) {
            const double step = axis[k] - axis[k - 1];
            if (!(step > 0.0) || std::abs(step - h) > 1e-9 * h) {
                throw ConfigurationError(std::string(name) + " axis must be uniform");
            }
        }
    }

    std::vector<double> x_axis_;
    std::vector<double> p_axis_;
    PhysicalConstants constants_;
};

/// n nodes center + (k - n/2) * h, h = 2 half_width / n. Node n/2 is the center.
inline std::vector<double> centered_axis(double center, double half_width, std::size_t n)
{
    if (n < 2 || !(half_width > 0.0)) {
        throw ConfigurationError("axis needs >= 2 nodes and a positive half width");
    }
    const double h = 2.0 * half_width / static_cast<double>(n);
    std::vector<double> axis(n);
    for (std::size_t k = 0; k < n; ++k) {
        axis[k] = center + (static_cast<double>(k) - static_cast<double>(n / 2)) * h;
    }
    return axis;
}

/// Lattice covering +-widths Husimi standard deviations around the centroid of
/// `state`. The Husimi widths are the state's widths broadened by the
/// coherent-state widths.
inline PhaseSpaceLattice default_lattice_for(const WaveFunction& state, const PhysicalConstants& c,
                                             std::size_t nodes = 128, double widths = 5.0)
{
    auto m = moments(state, c);
    const double sx = std::sqrt(m.delta_x * m.delta_x + c.lambda * c.lambda / 2.0);
    const double dp0 = c.coherent_delta_p();
    const double sp = std::sqrt(m.delta_p * m.delta_p + dp0 * dp0);
    return {centered_axis(m.mean_x, widths * sx, nodes), centered_axis(m.mean_p, widths * sp, nodes),
            c};
}

/// Samples of rho_H(x, p) = |<psi_alpha(x,p), Psi>|^2 / pi, row-major in x.
struct HusimiMap {
    PhaseSpaceLattice lattice;
    std::vector<double> values;
    /// Border values are not negligible, so masses and marginals are truncated.
    bool boundary_warning = false;

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const
    {
        return values[i * lattice.n_p() + j];
    }
};

namespace detail {

// Trapezoid weights (unit spacing) for n nodes.
inline std::vector<double> trapezoid_weights(std::size_t n)
{
    std::vector<double> w(n, 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    return w;
}

// Husimi border level above which the lattice is considered undersized.
inline constexpr double husimi_border_fraction = 1e-4;

} // namespace detail

inline HusimiMap husimi(const WaveFunction& state, const PhaseSpaceLattice& lattice)
{
    const PhysicalConstants& c = lattice.constants();
    require_normalized(state, "husimi");
    const Grid& g = *state.grid();
    const std::size_t npts = g.size();
    const std::size_t nx = lattice.n_x();
    const std::size_t np = lattice.n_p();
    auto xs = g.positions();

    // |<psi_alpha, Psi>| = |sum_j G(x_j - x) exp(-i p x_j / hbar) Psi_j| dx, the
    // remaining phase of psi_alpha being independent of j.
    std::vector<cplx> plane_waves(np * npts);
    parallel_for(np, [&](std::size_t j) {
        const double p = lattice.p_axis()[j];
        for (std::size_t k = 0; k < npts; ++k) {
            plane_waves[j * npts + k] = std::polar(1.0, -p * xs[k] / c.hbar);
        }
    });

    const double delta = c.coherent_delta_x();
    const double amplitude = std::pow(2.0 * pi * delta * delta, -0.25);
    std::vector<double> values(nx * np);
    parallel_for(nx, [&](std::size_t i) {
        const double x = lattice.x_axis()[i];
        std::vector<cplx> weighted(npts);
        for (std::size_t k = 0; k < npts; ++k) {
            const double u = xs[k] - x;
            weighted[k] = amplitude * std::exp(-u * u / (4.0 * delta * delta)) * state[k];
        }
        std::vector<cplx> terms(npts);
        for (std::size_t j = 0; j < np; ++j) {
            const cplx* wave = &plane_waves[j * npts];
            for (std::size_t k = 0; k < npts; ++k) {
                terms[k] = wave[k] * weighted[k];
            }
            const cplx overlap = pairwise_sum(terms) * g.dx();
            values[i * np + j] = std::norm(overlap) / pi;
        }
    });

    double peak = 0.0;
    double border = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            const double v = values[i * np + j];
            peak = std::max(peak, v);
            if (i == 0 || j == 0 || i + 1 == nx || j + 1 == np) {
                border = std::max(border, v);
            }
        }
    }
    const bool warn = border > detail::husimi_border_fraction * peak;
    return {lattice, std::move(values), warn};
}

/// Trapezoid-rule integral of rho_H dx dp. Equals 2 hbar for a normalized state.
inline double husimi_mass(const HusimiMap& map)
{
    const auto& lat = map.lattice;
    auto wx = detail::trapezoid_weights(lat.n_x());
    auto wp = detail::trapezoid_weights(lat.n_p());
    std::vector<double> terms(map.values.size());
    for (std::size_t i = 0; i < lat.n_x(); ++i) {
        for (std::size_t j = 0; j < lat.n_p(); ++j) {
            terms[i * lat.n_p() + j] = wx[i] * wp[j] * map(i, j);
        }
    }
    return pairwise_sum(terms) * lat.dx() * lat.dp();
}

struct HusimiMarginals {
    std::vector<double> x;
    std::vector<double> p;
};

/// Integrates out p (resp. x) with the trapezoid rule and divides by 2 hbar,
/// so each marginal integrates to one.
inline HusimiMarginals husimi_marginals(const HusimiMap& map)
{
    const auto& lat = map.lattice;
    const double scale = 1.0 / (2.0 * lat.constants().hbar);
    auto wx = detail::trapezoid_weights(lat.n_x());
    auto wp = detail::trapezoid_weights(lat.n_p());
    HusimiMarginals out{std::vector<double>(lat.n_x()), std::vector<double>(lat.n_p())};
    std::vector<double> terms(std::max(lat.n_x(), lat.n_p()));
    for (std::size_t i = 0; i < lat.n_x(); ++i) {
        for (std::size_t j = 0; j < lat.n_p(); ++j) {
            terms[j] = wp[j] * map(i, j);
        }
        out.x[i] = pairwise_sum(std::span<const double>(terms.data(), lat.n_p())) * lat.dp() * scale;
    }
    for (std::size_t j = 0; j < lat.n_p(); ++j) {
        for (std::size_t i = 0; i < lat.n_x(); ++i) {
            terms[i] = wx[i] * map(i, j);
        }
        out.p[j] = pairwise_sum(std::span<const double>(terms.data(), lat.n_x())) * lat.dx() * scale;
    }
    return out;
}

struct DistributionSummary {
    double mass = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Trapezoid mass, mean and variance of a density sampled on a uniform axis.
inline DistributionSummary summarize_distribution(std::span<const double> axis,
                                                  std::span<const double> density)
{
    if (axis.size() != density.size() || axis.size() < 2) {
        throw UsageError("axis and density must have equal length >= 2");
    }
    const double h = axis[1] - axis[0];
    auto w = detail::trapezoid_weights(axis.size());
    std::vector<double> m0(axis.size()), m1(axis.size()), m2(axis.size());
    for (std::size_t k = 0; k < axis.size(); ++k) {
        m0[k] = w[k] * density[k];
        m1[k] = m0[k] * axis[k];
        m2[k] = m1[k] * axis[k];
    }
    DistributionSummary s;
    s.mass = pairwise_sum(m0) * h;
    s.mean = pairwise_sum(m1) * h / s.mass;
    s.variance = pairwise_sum(m2) * h / s.mass - s.mean * s.mean;
    return s;
}

namespace detail {

// overlaps[s][q] = <psi_alpha_q, states[s]> for every quadrature node, each
// coherent state sampled once and shared across the states.
inline std::vector<std::vector<cplx>> coherent_overlaps(std::span<const WaveFunction> states,
                                                        const PolarQuadrature& quad,
                                                        const PhysicalConstants& c)
{
    const auto& nodes = quad.nodes();
    std::vector<std::vector<cplx>> out(states.size(), std::vector<cplx>(nodes.size()));
    if (states.empty()) {
        return out;
    }
    const Grid& g = *states.front().grid();
    for (const auto& f : states) {
        f.require_same_grid(states.front());
    }
    parallel_for(nodes.size(), [&](std::size_t q) {
        std::vector<cplx> psi(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            psi[j] = std::conj(coherent_sample(g.x(j), nodes[q].alpha, c));
        }
        std::vector<cplx> terms(g.size());
        for (std::size_t s = 0; s < states.size(); ++s) {
            for (std::size_t j = 0; j < g.size(); ++j) {
                terms[j] = psi[j] * states[s][j];
            }
            out[s][q] = pairwise_sum(terms) * g.dx();
        }
    });
    return out;
}

} // namespace detail

/// pi^{-1} sum_q w_q <chi_n, psi_q><psi_q, chi_m> for n, m < dim_probe: the
/// coherent-state resolution of the identity restricted to the low number
/// states. With R below sqrt(dim_probe) + 4 the e^{-R^2} tail dominates the
/// deviation from the identity.
inline Eigen::MatrixXcd completeness_operator(std::size_t dim_probe, const PolarQuadrature& quad,
                                              const GridPtr& grid, const PhysicalConstants& c)
{
    if (dim_probe == 0) {
        throw ConfigurationError("completeness probe needs at least one number state");
    }
    auto chi = number_states(grid, dim_probe, c);
    const auto& nodes = quad.nodes();
    // overlaps[n][q] = <psi_q, chi_n>
    auto overlaps = detail::coherent_overlaps(chi, quad, c);
    const auto d = static_cast<Eigen::Index>(dim_probe);
    Eigen::MatrixXcd out(d, d);
    std::vector<cplx> terms(nodes.size());
    for (std::size_t n = 0; n < dim_probe; ++n) {
        for (std::size_t m = 0; m < dim_probe; ++m) {
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                terms[q] = nodes[q].weight * std::conj(overlaps[n][q]) * overlaps[m][q];
            }
            out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                pairwise_sum(terms) / pi;
        }
    }
    return out;
}

/// Largest entrywise deviation of completeness_operator from the identity.
inline double completeness_residual(std::size_t dim_probe, const PolarQuadrature& quad,
                                    const GridPtr& grid, const PhysicalConstants& c)
{
    auto m = completeness_operator(dim_probe, quad, grid, c);
    return (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

/// Quadrature value of the disk integral of alpha^n conj(alpha)^m exp(-|alpha|^2),
/// which tends to pi n! delta_{nm} as R grows.
inline cplx disk_moment(std::size_t n, std::size_t m, const PolarQuadrature& quad)
{
    const auto& nodes = quad.nodes();
    std::vector<cplx> terms(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const cplx a = nodes[q].alpha;
        terms[q] = nodes[q].weight * std::pow(a, static_cast<int>(n))
                   * std::pow(std::conj(a), static_cast<int>(m)) * std::exp(-std::norm(a));
    }
    return pairwise_sum(terms);
}

inline constexpr std::size_t max_polynomial_degree = 8;

struct ExpectationRoutes {
    /// pi^{-1} sum_q w_q F(alpha_q) |<psi_q, Psi>|^2
    cplx phase_space;
    /// <Psi, F(A) Psi> by repeated application of A on the grid.
    cplx direct;
};

/// Expectation of F(A) = sum_k coeffs[k] A^k two ways. The quadrature disk
/// must contain the state's Husimi support.
inline ExpectationRoutes expectation_of_A_function(const WaveFunction& state,
                                                   std::span<const cplx> coeffs,
                                                   const PolarQuadrature& quad,
                                                   const PhysicalConstants& c)
{
    if (coeffs.empty()) {
        throw ConfigurationError("polynomial needs at least one coefficient");
    }
    if (coeffs.size() - 1 > max_polynomial_degree) {
        throw ConfigurationError("polynomial degree " + std::to_string(coeffs.size() - 1)
                                 + " exceeds the supported maximum "
                                 + std::to_string(max_polynomial_degree));
    }
    require_normalized(state, "expectation_of_A_function");

    auto polynomial = [&](cplx a) {
        cplx acc = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
            acc = acc * a + coeffs[k];
        }
        return acc;
    };

    auto overlaps = std::move(detail::coherent_overlaps({&state, 1}, quad, c).front());
    const auto& nodes = quad.nodes();
    std::vector<cplx> terms(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        terms[q] = nodes[q].weight * polynomial(nodes[q].alpha) * std::norm(overlaps[q]);
    }
    const cplx phase_space = pairwise_sum(terms) / pi;

    // Horner on the grid: v = (...(c_d A + c_{d-1}) A + ...) Psi
    WaveFunction v = coeffs.back() * state;
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        v = apply(Operator::A, v, c) + coeffs[k] * state;
    }
    return {phase_space, inner_product(state, v)};
}

inline constexpr std::size_t max_reconstructed_number_state = 12;

/// chi_n = pi^{-1} integral d^2 alpha conj(alpha)^n / sqrt(n!) exp(-|alpha|^2/2) psi_alpha,
/// evaluated with the polar quadrature.
inline WaveFunction reconstruct_number_state(std::size_t n, const PolarQuadrature& quad,
                                             const GridPtr& grid, const PhysicalConstants& c)
{
    c.validate();
    if (n > max_reconstructed_number_state) {
        throw ConfigurationError("number state " + std::to_string(n)
                                 + " exceeds the reconstruction limit "
                                 + std::to_string(max_reconstructed_number_state));
    }
    const double nd = static_cast<double>(n);
    if (quad.radius() < std::sqrt(nd + 1.0) + 4.0 || quad.n_theta() < 4 * (n + 1)
        || std::abs(quad.center()) != 0.0) {
        throw ConfigurationError("quadrature too small for number state " + std::to_string(n)
                                 + ": need an origin-centred disk with R >= "
                                 + std::to_string(std::sqrt(nd + 1.0) + 4.0) + " and n_theta >= "
                                 + std::to_string(4 * (n + 1)));
    }
    const auto& nodes = quad.nodes();
    const double inv_sqrt_factorial = std::exp(-0.5 * std::lgamma(nd + 1.0));
    std::vector<cplx> node_factor(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const cplx a = nodes[q].alpha;
        node_factor[q] = nodes[q].weight * std::pow(std::conj(a), static_cast<int>(n))
                         * inv_sqrt_factorial * std::exp(-std::norm(a) / 2.0) / pi;
    }
    const Grid& g = *grid;
    std::vector<cplx> out(g.size());
    parallel_for(g.size(), [&](std::size_t j) {
        std::vector<cplx> terms(nodes.size());
        const double x = g.x(j);
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            terms[q] = node_factor[q] * detail::coherent_sample(x, nodes[q].alpha, c);
        }
        out[j] = pairwise_sum(terms);
    });
    return {grid, std::move(out)};
}

} // namespace coherent
