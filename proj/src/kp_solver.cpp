#include "dlab/kp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "dlab/errors.hpp"
#include "dlab/fft.hpp"
#include "dlab/spectral_ops.hpp"

namespace dlab::kp {

namespace {

using cplx = std::complex<double>;
constexpr double kBlowUp = 1e6;

// z * (i m) without forming the complex product.
inline cplx times_i(cplx z, double m) { return {-m * z.imag(), m * z.real()}; }

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    if (!(h > 0.0)) throw ParameterError("time step h must be positive");
    if (!(t_end >= 0.0)) throw ParameterError("t_end must be non-negative");
    if (!(cutoff_factor > 0.0)) throw ParameterError("cutoff_factor must be positive");
    if (monitor_stride < 1) throw ParameterError("monitor_stride must be at least 1");
    for (double t : snapshot_times) {
        if (!(t >= 0.0 && t <= t_end)) throw ParameterError("snapshot time outside [0, t_end]");
    }
    (void)grid.make();
}

std::int64_t SolverConfig::step_count() const { return std::llround(t_end / h); }

std::int64_t SolverConfig::snapshot_step(double t) const { return std::llround(t / h); }

std::size_t ModePartition::stiff_count() const {
    return static_cast<std::size_t>(std::count(stiff.begin(), stiff.end(), std::uint8_t{1}));
}

ModePartition partition_modes(std::span<const cplx> symbol, double h, double cutoff_factor) {
    if (!(h > 0.0)) throw ParameterError("partition_modes: h must be positive");
    const double threshold = cutoff_factor / h;
    ModePartition p;
    p.stiff.resize(symbol.size());
    for (std::size_t s = 0; s < symbol.size(); ++s) p.stiff[s] = std::abs(symbol[s]) < threshold ? 0 : 1;
    return p;
}

cplx composite_amplification(cplx z, bool stiff) {
    const auto& ai = stiff ? CompositeTableau::implicit_a : CompositeTableau::explicit_a;
    std::array<cplx, 4> y{};
    for (int i = 0; i < 4; ++i) {
        cplx acc = 1.0;
        for (int j = 0; j < i; ++j) acc += ai[i][j] * z * y[j];
        y[i] = acc / (1.0 - ai[i][i] * z);
    }
    cplx r = 1.0;
    for (int j = 0; j < 4; ++j) r += CompositeTableau::b[j] * z * y[j];
    return r;
}

KpOperator::KpOperator(const Grid2D& grid, double epsilon, Branch branch, bool dealias)
    : grid_(grid),
      symbol_(spectral::linear_symbol(grid, epsilon, branch)),
      nl_multiplier_(grid.spectral_size(), 0.0),
      scratch_spec_(grid.spectral_size()),
      scratch_phys_(grid.physical_size()) {
    std::vector<double> mask;
    if (dealias) mask = spectral::dealias_mask(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nkx(); ++i) {
            if (grid.is_x_nyquist(i)) continue;
            const std::size_t s = grid.spectral_index(i, j);
            nl_multiplier_[s] = -0.5 * grid.kx_half(i) * (dealias ? mask[s] : 1.0);
        }
    }
}

double KpOperator::nonlinear(std::span<const cplx> uhat, std::span<cplx> out) const {
    const auto& fft = spectral::Fft2D::get(grid_.nx(), grid_.ny());
    std::copy(uhat.begin(), uhat.end(), scratch_spec_.begin());
    fft.inverse(scratch_spec_.data(), scratch_phys_.data());
    double* phys = scratch_phys_.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(scratch_phys_.size());
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const double v = phys[k];
        const double a = std::isfinite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
        mx = std::max(mx, a);
        phys[k] = v * v;
    }
    const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(out.size());
    if (linear_only_) {
        std::fill(out.begin(), out.end(), cplx{});
        return mx;
    }
    fft.forward(phys, out.data());
    const double* m = nl_multiplier_.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < ns; ++s) out[s] = times_i(out[s], m[s]);
    return mx;
}

CompositeStepper::CompositeStepper(const KpOperator& op, double h, ModePartition partition)
    : op_(&op), h_(h), partition_(std::move(partition)) {
    const auto L = op.symbol();
    const std::size_t n = L.size();
    if (partition_.stiff.size() != n) throw StructuralError("partition does not match the grid");
    for (int i = 0; i < 4; ++i) {
        inv_diag_[i].assign(n, 1.0);
        const double d = CompositeTableau::implicit_a[i][i];
        if (d != 0.0) {
            for (std::size_t s = 0; s < n; ++s) {
                if (partition_.is_stiff(s)) inv_diag_[i][s] = 1.0 / (1.0 - h * d * L[s]);
            }
        }
        n_[i].resize(n);
        ly_[i].resize(n);
    }
    y_.resize(n);
}

CompositeStepper::CompositeStepper(const KpOperator& op, double h, double cutoff_factor)
    : CompositeStepper(op, h, partition_modes(op.symbol(), h, cutoff_factor)) {}

double CompositeStepper::step(std::span<cplx> u) {
    constexpr auto& ae = CompositeTableau::explicit_a;
    constexpr auto& ai = CompositeTableau::implicit_a;
    constexpr auto& b = CompositeTableau::b;
    const cplx* L = op_->symbol().data();
    const std::uint8_t* stiff = partition_.stiff.data();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    const double h = h_;

    const double mx = op_->nonlinear(u, n_[0]);
    {
        cplx* ly0 = ly_[0].data();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t s = 0; s < n; ++s) ly0[s] = L[s] * u[s];
    }
    for (int i = 1; i < 4; ++i) {
        const cplx* inv = inv_diag_[i].data();
        cplx* y = y_.data();
        cplx* lyi = ly_[i].data();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t s = 0; s < n; ++s) {
            const auto& a_lin = stiff[s] ? ai : ae;
            cplx acc = u[s];
            for (int j = 0; j < i; ++j) acc += h * (ae[i][j] * n_[j][s] + a_lin[i][j] * ly_[j][s]);
            const cplx yi = acc * inv[s];
            y[s] = yi;
            lyi[s] = L[s] * yi;
        }
        op_->nonlinear(y_, n_[i]);
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < n; ++s) {
        cplx inc = 0.0;
        for (int j = 0; j < 4; ++j) inc += b[j] * (n_[j][s] + ly_[j][s]);
        u[s] += h * inc;
    }
    return mx;
}

IfRk4Stepper::IfRk4Stepper(const KpOperator& op, double h) : op_(&op), h_(h) {
    const auto L = op.symbol();
    e_full_.resize(L.size());
    e_half_.resize(L.size());
    for (std::size_t s = 0; s < L.size(); ++s) {
        e_full_[s] = std::polar(1.0, L[s].imag() * h) * std::exp(L[s].real() * h);
        e_half_[s] = std::polar(1.0, 0.5 * L[s].imag() * h) * std::exp(0.5 * L[s].real() * h);
    }
    for (auto& k : k_) k.resize(L.size());
    stage_.resize(L.size());
}

double IfRk4Stepper::step(std::span<cplx> u) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
    const double h = h_;
    const cplx* E = e_full_.data();
    const cplx* E2 = e_half_.data();
    cplx* st = stage_.data();
    cplx* k1 = k_[0].data();
    cplx* k2 = k_[1].data();
    cplx* k3 = k_[2].data();
    cplx* k4 = k_[3].data();

    const double mx = op_->nonlinear(u, k_[0]);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < n; ++s) st[s] = E2[s] * (u[s] + 0.5 * h * k1[s]);
    op_->nonlinear(stage_, k_[1]);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < n; ++s) st[s] = E2[s] * u[s] + 0.5 * h * k2[s];
    op_->nonlinear(stage_, k_[2]);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < n; ++s) st[s] = E[s] * u[s] + h * E2[s] * k3[s];
    op_->nonlinear(stage_, k_[3]);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < n; ++s) {
        u[s] = E[s] * u[s] + (h / 6.0) * (E[s] * k1[s] + 2.0 * E2[s] * (k2[s] + k3[s]) + k4[s]);
    }
    return mx;
}

Field composite_rk_step(const KpOperator& op, const Field& uhat, double h, const ModePartition& partition) {
    Field out = spectral::to_spectral(uhat);
    CompositeStepper stepper(op, h, partition);
    stepper.step(out.modes());
    for (const cplx& z : out.modes()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw BlowUpError("non-finite state", 0.0);
    }
    return out;
}

Field if_rk4_step(const KpOperator& op, const Field& uhat, double h) {
    Field out = spectral::to_spectral(uhat);
    IfRk4Stepper stepper(op, h);
    stepper.step(out.modes());
    for (const cplx& z : out.modes()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw BlowUpError("non-finite state", 0.0);
    }
    return out;
}

MonitorSample measure(const Field& uhat, double t, double epsilon, Branch branch) {
    const Field spec = spectral::to_spectral(uhat);
    const Field u = spectral::to_physical(uhat);
    MonitorSample m;
    m.t = t;
    m.linf = spectral::linf_norm(u);
    m.l2 = spectral::l2_norm(u);
    m.energy = spectral::hamiltonian(spec, epsilon, branch);
    m.tail = spectral::tail_indicator(spec);
    return m;
}

RunRecord evolve(const SolverConfig& cfg, const Field& u0, const EvolveHooks& hooks, std::int64_t start_step) {
    cfg.validate();
    const Grid2D grid = cfg.grid.make();
    if (!(u0.grid() == grid)) throw StructuralError("initial field grid differs from the configured grid");
    const auto wall_start = std::chrono::steady_clock::now();

    Field u = spectral::to_spectral(u0);
    spectral::project_zero_x_mean(u);

    KpOperator op(grid, cfg.epsilon, cfg.branch, cfg.dealias);
    std::optional<CompositeStepper> composite;
    std::optional<IfRk4Stepper> lawson;
    if (cfg.integrator == Integrator::Composite) {
        composite.emplace(op, cfg.h, cfg.cutoff_factor);
    } else {
        lawson.emplace(op, cfg.h);
    }

    const std::int64_t n_steps = cfg.step_count();
    std::set<std::int64_t> snap_steps;
    for (double t : cfg.snapshot_times) snap_steps.insert(cfg.snapshot_step(t));

    RunRecord rec;
    std::optional<MonitorSample> reference;
    double last_good_t = start_step * cfg.h;

    auto time_of = [&](std::int64_t k) { return static_cast<double>(k) * cfg.h; };

    auto monitor = [&](std::int64_t k) {
        const double t = time_of(k);
        const MonitorSample m = measure(u, t, cfg.epsilon, cfg.branch);
        if (!(m.linf <= kBlowUp)) throw BlowUpError("blow-up: |u|_inf = " + std::to_string(m.linf), last_good_t);
        if (m.linf > rec.peak_linf) {
            rec.peak_linf = m.linf;
            rec.peak_time = t;
        }
        rec.monitors.push_back(m);
        if (hooks.on_monitor) hooks.on_monitor(m);
        if (cfg.tail_limit > 0.0 && m.tail > cfg.tail_limit) {
            throw ResolutionLossError("resolution loss at t=" + std::to_string(t) +
                                          ": tail indicator " + std::to_string(m.tail),
                                      last_good_t);
        }
        if (!reference) {
            reference = m;
        } else {
            const auto drift = [](double now, double ref) {
                return ref != 0.0 ? std::abs(now - ref) / std::abs(ref) : std::abs(now);
            };
            if (drift(m.l2, reference->l2) > cfg.l2_drift_limit) {
                throw DriftError("L2 drift bound exceeded at t=" + std::to_string(t), last_good_t);
            }
            if (drift(m.energy, reference->energy) > cfg.energy_drift_limit) {
                throw DriftError("energy drift bound exceeded at t=" + std::to_string(t), last_good_t);
            }
        }
        last_good_t = t;
    };

    auto after_step = [&](std::int64_t k) {
        if (k % cfg.monitor_stride == 0 || k == n_steps) monitor(k);
        if (snap_steps.contains(k)) {
            rec.snapshots.emplace_back(time_of(k), k);
            if (hooks.on_snapshot) hooks.on_snapshot(time_of(k), k, u);
        }
    };

    after_step(start_step);
    for (std::int64_t k = start_step; k < n_steps; ++k) {
        const double mx = composite ? composite->step(u.modes()) : lawson->step(u.modes());
        if (!(mx <= kBlowUp)) {
            throw BlowUpError("blow-up: |u|_inf = " + std::to_string(mx) + " at t=" + std::to_string(time_of(k)),
                              k > 0 ? time_of(k - 1) : 0.0);
        }
        if (mx > rec.peak_linf) {
            rec.peak_linf = mx;
            rec.peak_time = time_of(k);
        }
        ++rec.steps_taken;
        after_step(k + 1);
    }

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    rec.final_state = std::move(u);
    return rec;
}

}  // namespace dlab::kp
