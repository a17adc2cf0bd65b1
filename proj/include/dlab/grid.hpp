#pragma once

#include <cstddef>
#include <vector>

namespace dlab::spectral {

/// Periodic rectangle [-Lx, Lx) x [-Ly, Ly) sampled on Nx x Ny nodes.
///
/// Physical data is stored row-major with y as the slow index:
/// `index(i, j) = j * Nx + i`. Spectral data uses the real-to-complex half
/// layout: Ny rows of Nx/2 + 1 modes, `spectral_index(i, j) = j * (Nx/2+1) + i`.
class Grid2D {
public:
    Grid2D(int nx, int ny, double lx, double ly);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    double dx() const noexcept { return 2.0 * lx_ / nx_; }
    double dy() const noexcept { return 2.0 * ly_ / ny_; }
    double x(int i) const noexcept { return -lx_ + i * dx(); }
    double y(int j) const noexcept { return -ly_ + j * dy(); }

    /// Wavenumbers in standard FFT ordering, integer multiples of pi/L.
    const std::vector<double>& kx() const noexcept { return kx_; }
    const std::vector<double>& ky() const noexcept { return ky_; }

    /// Number of stored x-modes in the half-spectrum layout.
    int nkx() const noexcept { return nx_ / 2 + 1; }
    std::size_t physical_size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t spectral_size() const noexcept { return static_cast<std::size_t>(nkx()) * ny_; }
    std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * nx_ + i; }
    std::size_t spectral_index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * nkx() + i;
    }

    /// kx of half-spectrum column i (0 <= i <= Nx/2); the last column is the
    /// Nyquist mode and carries -Nx/2 * pi/Lx as in the full ordering.
    double kx_half(int i) const noexcept { return kx_[static_cast<std::size_t>(i)]; }
    bool is_x_nyquist(int i) const noexcept { return i == nx_ / 2; }
    bool is_y_nyquist(int j) const noexcept { return j == ny_ / 2; }

    bool operator==(const Grid2D& other) const noexcept {
        return nx_ == other.nx_ && ny_ == other.ny_ && lx_ == other.lx_ && ly_ == other.ly_;
    }

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
    std::vector<double> kx_;
    std::vector<double> ky_;
};

bool is_power_of_two(long long n) noexcept;

/// Wavenumbers of an N-point periodic grid on [-L, L) in FFT ordering.
std::vector<double> fft_wavenumbers(int n, double half_period);

}  // namespace dlab::spectral
