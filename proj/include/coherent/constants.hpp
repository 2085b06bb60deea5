#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "coherent/errors.hpp"

namespace coherent {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;

/// Units of the problem. The length scale `lambda` sets the width of the
/// ground coherent state (delta_x = lambda / sqrt(2)).
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;
    double lambda = 1.0;

    void validate() const
    {
        auto check = [](double v, const char* name) {
            if (!std::isfinite(v) || v <= 0.0) {
                throw ConfigurationError(std::string(name) + " must be finite and > 0, got "
                                         + std::to_string(v));
            }
        };
        check(hbar, "hbar");
        check(mass, "mass");
        check(lambda, "lambda");
    }

    /// Position width of every coherent state.
    [[nodiscard]] double coherent_delta_x() const { return lambda / sqrt2; }
    /// Momentum width of every coherent state.
    [[nodiscard]] double coherent_delta_p() const { return hbar / (sqrt2 * lambda); }

    friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

} // namespace coherent
