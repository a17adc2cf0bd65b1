#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dlab::nls {

using cplx = std::complex<double>;

enum class InitialShape { Sech2, DSech2 };

// i eps psi_y + (eps^2 / 2) psi_xx + |psi|^2 psi = 0 on [-L, L), evolved in y.
struct NlsConfig {
    double epsilon = 0.1;
    int n = 1 << 14;
    double half_period = 5.0 * 3.14159265358979323846;
    double h = 1e-5;
    double y_end = 0.1;
    double c0 = 1.0;
    InitialShape init = InitialShape::Sech2;
    int record_stride = 1;
    bool linear_only = false;

    void validate() const;
    std::int64_t step_count() const;
    double dx() const { return 2.0 * half_period / n; }
    double x(int j) const { return -half_period + j * dx(); }
};

/// C0 sech^2 x, or C0 d/dx sech^2 x = -2 C0 sech^2 x tanh x.
std::vector<cplx> initial_datum(const NlsConfig& cfg);

struct AmplitudeSample {
    double y = 0.0;
    double max_abs = 0.0;
};

struct NlsRun {
    std::vector<AmplitudeSample> series;
    double peak = 0.0;       ///< max over all steps of max|psi|
    double peak_y = 0.0;
    double mass_drift = 0.0; ///< relative change of sum |psi|^2 dx
    std::vector<cplx> final_state;
    double y_final = 0.0;
};

/// Strang splitting: half nonlinear phase rotation, exact linear propagation in
/// Fourier space, half nonlinear rotation.
NlsRun nls_evolve(const NlsConfig& cfg, std::vector<cplx> psi0);

double mass(const std::vector<cplx>& psi, double dx);

struct Hydrodynamic {
    std::vector<double> rho;
    std::vector<double> w;
    std::vector<std::uint8_t> valid;
};

/// rho = |psi|^2, w = eps Im(psi_x / psi) with spectral psi_x. Points where
/// |psi| < 1e-12 max|psi| are flagged invalid and carry w = 0.
Hydrodynamic hydrodynamic_vars(const std::vector<cplx>& psi, double epsilon, double half_period);

/// Spectral x-derivative on [-L, L).
std::vector<cplx> derivative(const std::vector<cplx>& psi, double half_period);

}  // namespace dlab::nls
