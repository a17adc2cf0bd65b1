#pragma once

// Whitham modulation system for periodic KP waves in the Riemann-type
// variables beta_1 > beta_2 > beta_3 and the slope q = l/k.

#include <array>
#include <complex>
#include <optional>
#include <utility>

#include "dlab/analytic_solutions.hpp"
#include "dlab/field.hpp"

namespace dlab::whitham {

using analytic::Branch;
using cplx = std::complex<double>;
using Mat4 = std::array<std::array<double, 4>, 4>;

struct BetaTriple {
    double b1, b2, b3;
};

/// Ordered roots e1 > e2 > e3 of -eta^3 + V eta^2 + B eta + A.
struct CubicRoots {
    double e1, e2, e3;

    void validate() const;
    double V() const { return e1 + e2 + e3; }
    double B() const { return -(e1 * e2 + e1 * e3 + e2 * e3); }
    double A() const { return e1 * e2 * e3; }
    double modulus() const { return (e1 - e2) / (e1 - e3); }
};

/// beta1 = (e1+e2)/2, beta2 = (e1+e3)/2, beta3 = (e2+e3)/2. Ties throw.
BetaTriple beta_from_e(const CubicRoots& e);
CubicRoots e_from_beta(const BetaTriple& b);

struct WhithamPoint {
    double beta1 = 1.0;
    double beta2 = 0.5;
    double beta3 = 0.0;
    double q = 0.0;
    Branch branch = Branch::KPI;

    void validate() const;
    double modulus() const { return (beta2 - beta3) / (beta1 - beta3); }
    double alpha() const { return analytic::sign(branch); }
};

/// W = (1/(sqrt3 pi)) int_{e2}^{e1} sqrt(P) d eta and its partial derivatives in
/// A, B, V. This normalization satisfies <eta_theta^2> = W/k over one period.
struct AveragedDensities {
    double W, W_A, W_B, W_V;

    double wavenumber() const { return 1.0 / (6.0 * W_A); }
    double mean() const { return W_B / W_A; }  ///< c1 = <eta>
};

AveragedDensities averaged_densities(const CubicRoots& roots);

/// k = pi sqrt(e1 - e3) / (2 sqrt3 K(m)).
double wavenumber_closed_form(const CubicRoots& roots);

/// Characteristic speeds; limit branches for m > 1 - 1e-8 and m < 1e-8.
std::array<double, 3> whitham_speeds(const WhithamPoint& p);
/// The elliptic-integral expression without limit branches.
std::array<double, 3> whitham_speeds_general(const WhithamPoint& p);

struct ModulationMatrices {
    Mat4 A;
    Mat4 B;
};

ModulationMatrices modulation_matrices(const WhithamPoint& p);

enum class Classification { Hyperbolic, Elliptic, Mixed };

const char* to_string(Classification c);

struct PencilSpectrum {
    std::array<cplx, 4> eigenvalues;
    Classification classification;
};

/// Eigenvalues of A + xi B, sorted by decreasing real part.
PencilSpectrum pencil_spectrum(const Mat4& A, const Mat4& B, double xi);

/// Eigenvalues of the soliton-limit 2x2 system in (a, q).
std::pair<cplx, cplx> soliton_system_eigs(double a, double q, double xi, Branch branch);

/// alpha (xi - q)^2 beta1^3 (beta1 - 2 xi alpha + 4 xi alpha q - 2 alpha q^2)^2.
double p3_discriminant_at_beta3_zero(double beta1, double q, double xi, Branch branch);

/// q(x, y) = (d_x^{-1} u_y)(x, y) / u(x, y) for sampled initial data, by exact
/// trigonometric interpolation. Empty where |u| < 1e-8 max|u|.
std::optional<double> riemann_q_init(const spectral::Field& u0, double x, double y);

}  // namespace dlab::whitham
