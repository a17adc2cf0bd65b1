#pragma once

#include <complex>
#include <functional>
#include <span>

#include "dlab/aligned.hpp"
#include "dlab/grid.hpp"

namespace dlab::spectral {

enum class Repr { Physical, Spectral };

/// Scalar state on a Grid2D held in exactly one representation at a time.
///
/// Physical data is real (Nx*Ny values); spectral data is the half-spectrum of
/// a real field, so Hermitian symmetry is implicit and the inverse transform
/// is real by construction.
class Field {
public:
    static Field physical(const Grid2D& grid);
    static Field spectral(const Grid2D& grid);
    static Field from_function(const Grid2D& grid, const std::function<double(double, double)>& f);

    const Grid2D& grid() const noexcept { return grid_; }
    Repr repr() const noexcept { return repr_; }
    bool is_physical() const noexcept { return repr_ == Repr::Physical; }
    bool is_spectral() const noexcept { return repr_ == Repr::Spectral; }

    /// Throw StructuralError if the field is not in the requested representation.
    void require(Repr r) const;

    std::span<double> values();
    std::span<const double> values() const;
    std::span<std::complex<double>> modes();
    std::span<const std::complex<double>> modes() const;

    double& at(int i, int j) { return values()[grid_.index(i, j)]; }
    double at(int i, int j) const { return values()[grid_.index(i, j)]; }
    std::complex<double>& mode(int i, int j) { return modes()[grid_.spectral_index(i, j)]; }
    std::complex<double> mode(int i, int j) const { return modes()[grid_.spectral_index(i, j)]; }

private:
    Field(const Grid2D& grid, Repr repr);

    Grid2D grid_;
    Repr repr_;
    RealVector phys_;
    ComplexVector spec_;
};

/// Switch representation (physical <-> spectral). Forward is unnormalized,
/// inverse carries 1/(Nx Ny).
Field transform(const Field& f);

Field to_physical(const Field& f);
Field to_spectral(const Field& f);

}  // namespace dlab::spectral
