#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"

namespace coherent {

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b]. Roots of P_n by Newton iteration
/// from the Chebyshev-like initial guess.
inline GaussLegendreRule gauss_legendre(std::size_t n, double a, double b)
{
    if (n == 0) {
        throw ConfigurationError("Gauss-Legendre rule needs at least one node");
    }
    GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p2) / kd;
            }
            // p0 = P_n(z), p1 = P_{n-1}(z)
            dp = nd * (z * p0 - p1) / (z * z - 1.0);
            const double step = p0 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

/// Polar product rule on the disk |alpha - center| <= radius: Gauss-Legendre
/// in r times the uniform rule in theta. Weights include the Jacobian r, so
/// sum_q w_q f(alpha_q) approximates the area integral of f over the disk.
class PolarQuadrature {
public:
    struct Node {
        std::complex<double> alpha;
        double weight;
    };

    PolarQuadrature(double radius, std::size_t n_radial, std::size_t n_theta,
                    std::complex<double> center = {})
        : radius_(radius), n_radial_(n_radial), n_theta_(n_theta), center_(center)
    {
        if (!(radius > 0.0) || !std::isfinite(radius)) {
            throw ConfigurationError("quadrature radius must be finite and > 0");
        }
        if (n_radial == 0 || n_theta == 0) {
            throw ConfigurationError("quadrature needs radial and angular nodes");
        }
        radial_ = gauss_legendre(n_radial, 0.0, radius);
        const double dtheta = 2.0 * pi / static_cast<double>(n_theta);
        nodes_.reserve(n_radial * n_theta);
        for (std::size_t i = 0; i < n_radial; ++i) {
            const double r = radial_.nodes[i];
            for (std::size_t k = 0; k < n_theta; ++k) {
                const double theta = dtheta * static_cast<double>(k);
                nodes_.push_back({center + std::polar(r, theta), radial_.weights[i] * r * dtheta});
            }
        }
    }

    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] std::size_t n_radial() const { return n_radial_; }
    [[nodiscard]] std::size_t n_theta() const { return n_theta_; }
    [[nodiscard]] std::complex<double> center() const { return center_; }
    [[nodiscard]] const GaussLegendreRule& radial() const { return radial_; }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }

private:
    double radius_;
    std::size_t n_radial_;
    std::size_t n_theta_;
    std::complex<double> center_;
    GaussLegendreRule radial_;
    std::vector<Node> nodes_;
};

/// Desk-scale rule: R = 8, 96 radial nodes, 64 angles.
inline PolarQuadrature default_quadrature(std::complex<double> center = {})
{
    return PolarQuadrature(8.0, 96, 64, center);
}

} // namespace coherent
