#pragma once

#include <span>
#include <vector>

#include "dlab/field.hpp"

namespace dlab::diag {

using spectral::Field;

struct Peak {
    double x = 0.0;
    double y = 0.0;
    double height = 0.0;
    int i = 0;  ///< grid argmax
    int j = 0;
};

struct FitResult {
    std::vector<double> params;
    std::vector<double> stderr_proxy;  ///< sqrt(diag(s^2 (J^T J)^-1)), NaN when undetermined
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Strict local maxima (8-neighbourhood, periodic) above rel_threshold * max,
/// refined by a quadratic fit on the 3x3 stencil, sorted by height.
std::vector<Peak> find_peaks(const Field& f, double rel_threshold = 0.3);

/// Levenberg-Marquardt fit of a lump centred at (x0, y0) at t = 0 on the
/// (2 window + 1)^2 cells around the seed. params = (a, b, x0, y0).
FitResult fit_lump(const Field& f, const Peak& seed, int window, double epsilon);

/// f minus the fitted lump (physical representation).
Field subtract_fitted_lump(const Field& f, const FitResult& fit, double epsilon);

struct Spacing {
    double mean_nn_distance;
    int count;
};

/// Mean nearest-neighbour distance. Throws ParameterError below two peaks.
Spacing lattice_spacing(std::span<const Peak> peaks);

/// y = c1 + c2 x^beta; params = (c1, c2, beta). Fewer than four points or an
/// unidentifiable exponent give converged = false.
FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope;
    double intercept;
};

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

struct LumpRun {
    double epsilon;
    double x_max;
    double t_max;
    double u_max;
};

/// Fits x_max - u_max t_max / 8 = c1 + c2 eps^beta.
FitResult lump_position_scaling(std::span<const LumpRun> runs);

}  // namespace dlab::diag
