#include "dlab/nls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlab/aligned.hpp"
#include "dlab/errors.hpp"
#include "dlab/fft.hpp"
#include "dlab/grid.hpp"
#include "dlab/summation.hpp"

namespace dlab::nls {

void NlsConfig::validate() const {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    if (n < 8 || !spectral::is_power_of_two(n)) throw ParameterError("n must be a power of two >= 8");
    if (!(half_period > 0.0)) throw ParameterError("half period must be positive");
    if (!(h > 0.0)) throw ParameterError("step h must be positive");
    if (!(y_end > 0.0)) throw ParameterError("y_end must be positive");
    if (record_stride < 1) throw ParameterError("record_stride must be at least 1");
}

std::int64_t NlsConfig::step_count() const { return std::llround(y_end / h); }

std::vector<cplx> initial_datum(const NlsConfig& cfg) {
    std::vector<cplx> psi(static_cast<std::size_t>(cfg.n));
    for (int j = 0; j < cfg.n; ++j) {
        const double x = cfg.x(j);
        const double s = 1.0 / std::cosh(x);
        psi[j] = cfg.init == InitialShape::Sech2 ? cfg.c0 * s * s : -2.0 * cfg.c0 * s * s * std::tanh(x);
    }
    return psi;
}

double mass(const std::vector<cplx>& psi, double dx) {
    return dx * pairwise_sum(std::span<const cplx>(psi), [](const cplx& z) { return std::norm(z); });
}

NlsRun nls_evolve(const NlsConfig& cfg, std::vector<cplx> psi0) {
    cfg.validate();
    if (psi0.size() != static_cast<std::size_t>(cfg.n)) throw StructuralError("initial datum has wrong length");
    const auto& fft = spectral::Fft1D::get(cfg.n);
    const auto k = spectral::fft_wavenumbers(cfg.n, cfg.half_period);
    const double eps = cfg.epsilon;
    const double h = cfg.h;

    std::vector<cplx> propagator(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) propagator[j] = std::polar(1.0, -0.5 * eps * k[j] * k[j] * h);

    ComplexVector psi(psi0.begin(), psi0.end());
    ComplexVector hat(psi.size());
    const double m0 = mass(psi0, cfg.dx());

    auto max_abs = [&] {
        double m = 0.0;
        for (const cplx& z : psi) {
            const double a = std::abs(z);
            if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
            m = std::max(m, a);
        }
        return m;
    };
    auto rotate = [&](double dy) {
        if (cfg.linear_only) return;
        for (cplx& z : psi) z *= std::polar(1.0, std::norm(z) * dy / eps);
    };

    NlsRun run;
    const std::int64_t steps = cfg.step_count();
    run.peak = max_abs();
    if (!std::isfinite(run.peak)) throw BlowUpError("non-finite NLS initial data", 0.0);
    run.series.push_back({0.0, run.peak});
    for (std::int64_t s = 0; s < steps; ++s) {
        rotate(0.5 * h);
        fft.forward(psi.data(), hat.data());
        for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= propagator[j];
        fft.inverse(hat.data(), psi.data());
        rotate(0.5 * h);

        const double y = static_cast<double>(s + 1) * h;
        const double m = max_abs();
        if (!std::isfinite(m) || m > 1e6) throw BlowUpError("non-finite NLS state at y=" + std::to_string(y), s * h);
        if (m > run.peak) {
            run.peak = m;
            run.peak_y = y;
        }
        if ((s + 1) % cfg.record_stride == 0 || s + 1 == steps) run.series.push_back({y, m});
    }
    run.final_state.assign(psi.begin(), psi.end());
    run.y_final = static_cast<double>(steps) * h;
    run.mass_drift = m0 > 0.0 ? (mass(run.final_state, cfg.dx()) - m0) / m0 : 0.0;
    return run;
}

std::vector<cplx> derivative(const std::vector<cplx>& psi, double half_period) {
    const int n = static_cast<int>(psi.size());
    const auto& fft = spectral::Fft1D::get(n);
    const auto k = spectral::fft_wavenumbers(n, half_period);
    ComplexVector in(psi.begin(), psi.end());
    ComplexVector hat(psi.size());
    fft.forward(in.data(), hat.data());
    for (int j = 0; j < n; ++j) hat[j] *= (j == n / 2) ? cplx{} : cplx(0.0, k[j]);
    fft.inverse(hat.data(), in.data());
    return {in.begin(), in.end()};
}

Hydrodynamic hydrodynamic_vars(const std::vector<cplx>& psi, double epsilon, double half_period) {
    const auto dpsi = derivative(psi, half_period);
    double mx = 0.0;
    for (const cplx& z : psi) mx = std::max(mx, std::abs(z));
    Hydrodynamic out;
    out.rho.resize(psi.size());
    out.w.resize(psi.size(), 0.0);
    out.valid.resize(psi.size(), 0);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        out.rho[j] = std::norm(psi[j]);
        if (std::abs(psi[j]) >= 1e-12 * mx && mx > 0.0) {
            out.valid[j] = 1;
            out.w[j] = epsilon * (dpsi[j] / psi[j]).imag();
        }
    }
    return out;
}

}  // namespace dlab::nls
