#include "dlab/field.hpp"

#include "dlab/errors.hpp"
#include "dlab/fft.hpp"

namespace dlab::spectral {

Field::Field(const Grid2D& grid, Repr repr) : grid_(grid), repr_(repr) {
    if (repr == Repr::Physical) {
        phys_.assign(grid.physical_size(), 0.0);
    } else {
        spec_.assign(grid.spectral_size(), {0.0, 0.0});
    }
}

Field Field::physical(const Grid2D& grid) { return Field(grid, Repr::Physical); }

Field Field::spectral(const Grid2D& grid) { return Field(grid, Repr::Spectral); }

Field Field::from_function(const Grid2D& grid, const std::function<double(double, double)>& f) {
    Field out = physical(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        const double y = grid.y(j);
        for (int i = 0; i < grid.nx(); ++i) out.at(i, j) = f(grid.x(i), y);
    }
    return out;
}

void Field::require(Repr r) const {
    if (repr_ != r) {
        throw StructuralError(r == Repr::Physical ? "field must be in physical representation"
                                                  : "field must be in spectral representation");
    }
}

std::span<double> Field::values() {
    require(Repr::Physical);
    return phys_;
}

std::span<const double> Field::values() const {
    require(Repr::Physical);
    return phys_;
}

std::span<std::complex<double>> Field::modes() {
    require(Repr::Spectral);
    return spec_;
}

std::span<const std::complex<double>> Field::modes() const {
    require(Repr::Spectral);
    return spec_;
}

Field transform(const Field& f) {
    const Grid2D& g = f.grid();
    const Fft2D& fft = Fft2D::get(g.nx(), g.ny());
    if (f.is_physical()) {
        Field out = Field::spectral(g);
        fft.forward(f.values().data(), out.modes().data());
        return out;
    }
    ComplexVector scratch(f.modes().begin(), f.modes().end());
    Field out = Field::physical(g);
    fft.inverse(scratch.data(), out.values().data());
    return out;
}

Field to_physical(const Field& f) { return f.is_physical() ? f : transform(f); }

Field to_spectral(const Field& f) { return f.is_spectral() ? f : transform(f); }

}  // namespace dlab::spectral
