#pragma once

// Closed-form solution families of the KP equation
//   (u_t + u u_x + eps^2 u_xxx)_x + alpha u_yy = 0
// and of the focusing NLS equation, used as initial data, exactness oracles
// and fit models.

#include <complex>
#include <functional>

namespace dlab::analytic {

/// Equation branch: alpha = -1 is KPI (focusing), alpha = +1 is KPII.
enum class Branch : int { KPI = -1, KPII = +1 };

constexpr double sign(Branch b) noexcept { return static_cast<int>(b); }
Branch branch_from_alpha(double alpha);

using Evaluator = std::function<double(double x, double y, double t)>;

/// Periodic travelling wave with levels beta1 > beta2 > beta3.
struct CnoidalParams {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double q = 0.0;  ///< transverse slope l/k
    double phase = 0.0;
    double epsilon = 1.0;
    Branch branch = Branch::KPII;

    /// Throws ParameterError on a violated invariant.
    void validate() const;
    double modulus() const { return (beta2 - beta3) / (beta1 - beta3); }
    double wavenumber() const;
    double frequency() const;
};

struct SolitonParams {
    double k = 1.0;
    double l = 0.0;
    double phase = 0.0;
    double epsilon = 1.0;
    Branch branch = Branch::KPII;

    void validate() const;
    double frequency() const;  ///< 4k^3 + alpha l^2 / k
};

/// KPI lump; peak 24 b^2 at x = (a^2 + 3b^2) t, y = -2 a t.
struct LumpParams {
    double a = 0.0;
    double b = 1.0;
    double epsilon = 1.0;

    void validate() const;
};

/// Peregrine breather of the epsilon = 1 focusing NLS.
struct BreatherParams {
    double a = 0.0;
    double b = 1.0;
};

double cnoidal_wave(const CnoidalParams& p, double x, double y, double t);
double line_soliton(const SolitonParams& p, double x, double y, double t);
double lump(const LumpParams& p, double x, double y, double t);

/// Q(x, y; a, b) with y the evolution variable of i psi_y + psi_xx / 2 + |psi|^2 psi = 0.
std::complex<double> peregrine(const BreatherParams& p, double x, double y);

/// 12 |Q(x - (a^2+3b^2) t, 2 sqrt3 (y + 2at); a / (2 sqrt3), b / 2)|^2 - 3 b^2,
/// which coincides with lump(a, b, eps = 1).
double lump_from_breather(double a, double b, double x, double y, double t);

/// -C0 d/dx sech^2(sqrt(x^2 + y^2)); 0 at the origin by continuity.
double dsw_initial(double c0, double x, double y);

/// Pseudo-rotation: (x, y, t) -> u(x + a y - alpha a^2 t, y - 2 alpha a t, t).
/// Maps exact KP solutions to exact KP solutions.
Evaluator pseudo_rotate(Evaluator u, double a, Branch branch);

Evaluator as_evaluator(const CnoidalParams& p);
Evaluator as_evaluator(const SolitonParams& p);
Evaluator as_evaluator(const LumpParams& p);

}  // namespace dlab::analytic
