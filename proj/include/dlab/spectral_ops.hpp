#pragma once

#include <complex>
#include <vector>

#include "dlab/analytic_solutions.hpp"
#include "dlab/field.hpp"

namespace dlab::spectral {

using analytic::Branch;

// Multiplier conventions shared by every operator in this header:
//  * modes with kx = 0 are annihilated by anything involving 1/kx;
//  * the x-Nyquist column (and the y-Nyquist row for odd y-multipliers)
//    carries zero for odd multipliers, keeping the half spectrum Hermitian.

/// L(kx, ky) = -i alpha ky^2/kx + i eps^2 kx^3, zero where kx = 0 and on the
/// x-Nyquist column. Purely imaginary; half-spectrum layout.
std::vector<std::complex<double>> linear_symbol(const Grid2D& grid, double epsilon, Branch branch);

/// 2/3-rule mask (1 keep, 0 drop) in half-spectrum layout.
std::vector<double> dealias_mask(const Grid2D& grid);

/// -(i/2) kx * FFT(u^2), with u^2 formed pointwise in physical space.
Field nonlinear_term(const Field& u, bool dealias = false);

/// Multiply by -i/kx; zero on kx = 0 modes.
Field antiderivative_x(const Field& f);
Field derivative_x(const Field& f);
Field derivative_y(const Field& f);

/// sqrt(dx dy sum u^2). Spectral input is handled through Parseval.
double l2_norm(const Field& f);
double linf_norm(const Field& f);
/// dx dy sum [u^3/6 - (eps^2/2) u_x^2 + (alpha/2) (d_x^{-1} u_y)^2]; conserved by
/// u_t = -d_x (dH/du), i.e. by the KP flow.
double hamiltonian(const Field& f, double epsilon, Branch branch);

/// Max |coefficient| over modes with |k| >= 0.9 max|k| (outermost annulus of
/// the wavenumber radius), divided by the global max |coefficient|.
double tail_indicator(const Field& f);

/// Remove the x-mean of every y-line (kx = 0 column) and the x-Nyquist column.
void project_zero_x_mean(Field& spectral_field);

}  // namespace dlab::spectral
