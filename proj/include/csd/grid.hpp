#pragma once

#include <cmath>
#include <stdexcept>

#include "csd/common.hpp"

namespace csd {

/// Uniform N x N periodic grid on the torus [0, L)^2.
///
/// Index conventions: points x_j = j*L/N, row-major storage (index = ix*N + iy).
/// The wavenumber attached to FFT index k is xi = 2*pi*kc/L with kc the centered
/// integer in [-N/2, N/2); the Nyquist index N/2 maps to -N/2.
struct Grid {
    int n = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int n_, double length_) : n(n_), length(length_) {
        if (n < 4 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: N must be a power of two >= 4");
        if (!(length > 0.0))
            throw std::invalid_argument("Grid: L must be positive");
    }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::size_t size() const { return std::size_t(n) * std::size_t(n); }

    /// Centered integer mode for FFT index i in [0, N).
    int mode(int i) const { return i < n / 2 ? i : i - n; }

    /// Wavenumber component for FFT index i.
    double xi(int i) const { return 2.0 * pi * mode(i) / length; }

    double dx() const { return length / n; }
    /// Quadrature weight of one grid cell.
    double cell_area() const { return dx() * dx(); }

    /// Smallest nonzero |xi| on the lattice.
    double xi_min() const { return 2.0 * pi / length; }
    /// Largest |xi| on the lattice (corner of the centered square).
    double xi_max() const { return std::sqrt(2.0) * pi * n / length; }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("grid mismatch between fields");
}

}  // namespace csd
