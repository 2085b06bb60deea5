#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coherent/constants.hpp"
#include "coherent/errors.hpp"
#include "coherent/fft.hpp"
#include "coherent/parallel.hpp"

namespace coherent {

using cplx = std::complex<double>;

/// Uniform periodic position lattice x_j = x_min + j*dx, j = 0..n-1, with the
/// matching spectral wavenumber lattice in standard DFT order.
class Grid {
public:
    [[nodiscard]] std::size_t size() const { return n_points_; }
    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] double length() const { return x_max_ - x_min_; }
    [[nodiscard]] double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
    [[nodiscard]] std::span<const double> positions() const { return positions_; }
    [[nodiscard]] std::span<const double> wavenumbers() const { return wavenumbers_; }

    /// Momentum lattice hbar*k in DFT order.
    [[nodiscard]] std::vector<double> momentum_lattice(double hbar) const
    {
        std::vector<double> p(wavenumbers_.size());
        std::transform(wavenumbers_.begin(), wavenumbers_.end(), p.begin(),
                       [hbar](double k) { return hbar * k; });
        return p;
    }
    [[nodiscard]] double momentum_spacing(double hbar) const
    {
        return 2.0 * pi * hbar / (static_cast<double>(n_points_) * dx_);
    }
    /// Largest representable |p| (the Nyquist momentum).
    [[nodiscard]] double momentum_max(double hbar) const { return pi * hbar / dx_; }

    friend bool operator==(const Grid& a, const Grid& b)
    {
        return a.n_points_ == b.n_points_ && a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_;
    }

private:
    friend std::shared_ptr<const Grid> make_grid(std::size_t, double, double);

    Grid(std::size_t n, double x_min, double x_max)
        : n_points_(n), x_min_(x_min), x_max_(x_max),
          dx_((x_max - x_min) / static_cast<double>(n)), positions_(n), wavenumbers_(n)
    {
        const double dk = 2.0 * pi / (static_cast<double>(n) * dx_);
        for (std::size_t j = 0; j < n; ++j) {
            positions_[j] = x(j);
            auto signed_index = static_cast<long>(j);
            if (j >= n / 2) {
                signed_index -= static_cast<long>(n);
            }
            wavenumbers_[j] = dk * static_cast<double>(signed_index);
        }
    }

    std::size_t n_points_;
    double x_min_;
    double x_max_;
    double dx_;
    std::vector<double> positions_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t n_points, double x_min, double x_max)
{
    if (n_points < 8 || (n_points & (n_points - 1)) != 0) {
        throw ConfigurationError("n_points must be a power of two >= 8, got "
                                 + std::to_string(n_points));
    }
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw ConfigurationError("grid interval must satisfy x_max > x_min");
    }
    return GridPtr(new Grid(n_points, x_min, x_max));
}

/// Default desk-scale grid: 1024 points on [-20, 20].
inline GridPtr default_grid() { return make_grid(1024, -20.0, 20.0); }

/// Complex samples of a state on a grid. Immutable value type.
class WaveFunction {
public:
    WaveFunction(GridPtr grid, std::vector<cplx> samples)
        : grid_(std::move(grid)), samples_(std::move(samples))
    {
        if (!grid_) {
            throw UsageError("wavefunction requires a grid");
        }
        if (samples_.size() != grid_->size()) {
            throw UsageError("sample count " + std::to_string(samples_.size())
                             + " does not match grid size " + std::to_string(grid_->size()));
        }
    }

    static WaveFunction zero(GridPtr grid)
    {
        std::size_t n = grid->size();
        return WaveFunction(std::move(grid), std::vector<cplx>(n));
    }

    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] std::span<const cplx> samples() const { return samples_; }
    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] const cplx& operator[](std::size_t j) const { return samples_[j]; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] WaveFunction normalized() const;

    friend WaveFunction operator+(const WaveFunction& a, const WaveFunction& b)
    {
        a.require_same_grid(b);
        std::vector<cplx> out(a.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = a.samples_[j] + b.samples_[j];
        }
        return {a.grid_, std::move(out)};
    }
    friend WaveFunction operator-(const WaveFunction& a, const WaveFunction& b)
    {
        a.require_same_grid(b);
        std::vector<cplx> out(a.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = a.samples_[j] - b.samples_[j];
        }
        return {a.grid_, std::move(out)};
    }
    friend WaveFunction operator*(cplx c, const WaveFunction& a)
    {
        std::vector<cplx> out(a.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = c * a.samples_[j];
        }
        return {a.grid_, std::move(out)};
    }

    void require_same_grid(const WaveFunction& other) const
    {
        if (grid_ != other.grid_ && !(*grid_ == *other.grid_)) {
            throw UsageError("wavefunctions live on different grids");
        }
    }

private:
    GridPtr grid_;
    std::vector<cplx> samples_;
};

/// <f, g> = sum_j conj(f_j) g_j dx, conjugate-linear in f.
inline cplx inner_product(const WaveFunction& f, const WaveFunction& g)
{
    f.require_same_grid(g);
    std::vector<cplx> terms(f.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        terms[j] = std::conj(f[j]) * g[j];
    }
    return pairwise_sum(terms) * f.grid()->dx();
}

inline double WaveFunction::norm() const
{
    std::vector<double> terms(samples_.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        terms[j] = std::norm(samples_[j]);
    }
    return std::sqrt(pairwise_sum(terms) * grid_->dx());
}

inline WaveFunction WaveFunction::normalized() const
{
    double n = norm();
    if (n == 0.0 || !std::isfinite(n)) {
        throw UsageError("cannot normalize a zero or non-finite wavefunction");
    }
    return cplx(1.0 / n, 0.0) * *this;
}

/// Momentum-space amplitudes phi(p_k) on the momentum lattice (DFT order),
/// scaled so that sum_k |phi_k|^2 dp equals the position-space norm squared.
inline std::vector<cplx> momentum_amplitudes(const WaveFunction& f, double hbar)
{
    const Grid& g = *f.grid();
    auto spectrum = fft::forward(f.samples());
    const double scale = g.dx() / std::sqrt(2.0 * pi * hbar);
    auto k = g.wavenumbers();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        spectrum[i] *= scale * std::polar(1.0, -k[i] * g.x_min());
    }
    return spectrum;
}

/// Norm computed on the momentum lattice.
inline double momentum_norm(const WaveFunction& f, double hbar)
{
    auto phi = momentum_amplitudes(f, hbar);
    std::vector<double> terms(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        terms[i] = std::norm(phi[i]);
    }
    return std::sqrt(pairwise_sum(terms) * f.grid()->momentum_spacing(hbar));
}

/// Multiplies the spectrum of f by multiplier(k) and transforms back.
template <typename Multiplier>
WaveFunction spectral_multiply(const WaveFunction& f, Multiplier&& multiplier)
{
    auto spectrum = fft::forward(f.samples());
    auto k = f.grid()->wavenumbers();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        spectrum[i] *= multiplier(k[i]);
    }
    return {f.grid(), fft::inverse(spectrum)};
}

/// Largest amplitude inside the boundary zones: the outer 1/16 of the position
/// lattice on each side, and the outer 1/16 of the momentum lattice (scaled to
/// plane-wave amplitudes). Spectral identities assume this is
/// negligible.
inline double edge_amplitude(const WaveFunction& f)
{
    const Grid& g = *f.grid();
    const std::size_t n = g.size();
    const std::size_t zone = std::max<std::size_t>(1, n / 16);
    double edge = 0.0;
    for (std::size_t j = 0; j < zone; ++j) {
        edge = std::max({edge, std::abs(f[j]), std::abs(f[n - 1 - j])});
    }
    // |F_k| / n is the amplitude of the plane-wave component k.
    auto spectrum = fft::forward(f.samples());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < zone; ++m) {
        std::size_t k = n / 2 - zone + m;
        edge = std::max({edge, std::abs(spectrum[k]) * scale,
                         std::abs(spectrum[k + zone]) * scale});
    }
    return edge;
}

inline constexpr double boundary_threshold = 1e-10;

inline bool is_contained(const WaveFunction& f) { return edge_amplitude(f) < boundary_threshold; }

} // namespace coherent
