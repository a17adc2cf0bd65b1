#include "dlab/grid.hpp"

#include <numbers>
#include <string>

#include "dlab/errors.hpp"

namespace dlab::spectral {

bool is_power_of_two(long long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> fft_wavenumbers(int n, double half_period) {
    std::vector<double> k(static_cast<std::size_t>(n));
    const double unit = std::numbers::pi / half_period;
    for (int i = 0; i < n; ++i) {
        const int s = i < n / 2 ? i : i - n;
        k[static_cast<std::size_t>(i)] = unit * s;
    }
    return k;
}

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 8 || ny < 8 || !is_power_of_two(nx) || !is_power_of_two(ny)) {
        throw ParameterError("grid sizes must be powers of two >= 8, got " + std::to_string(nx) + "x" +
                             std::to_string(ny));
    }
    if (!(lx > 0.0 && ly > 0.0)) throw ParameterError("grid half-periods must be positive");
    kx_ = fft_wavenumbers(nx, lx);
    ky_ = fft_wavenumbers(ny, ly);
}

}  // namespace dlab::spectral
