#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dlab/aligned.hpp"
#include "dlab/analytic_solutions.hpp"
#include "dlab/field.hpp"

namespace dlab::kp {

using analytic::Branch;
using spectral::Field;
using spectral::Grid2D;

enum class Integrator { Composite, IntegratingFactor };

struct GridSpec {
    int nx = 512;
    int ny = 512;
    double lx = 5.0 * 3.14159265358979323846;
    double ly = 5.0 * 3.14159265358979323846;

    Grid2D make() const { return Grid2D(nx, ny, lx, ly); }
};

struct SolverConfig {
    double epsilon = 0.1;
    Branch branch = Branch::KPI;
    double h = 2e-4;
    double t_end = 0.0;
    GridSpec grid;
    double cutoff_factor = 1.0 / 128.0;
    std::vector<double> snapshot_times;
    int monitor_stride = 1;
    bool dealias = false;
    Integrator integrator = Integrator::Composite;

    /// Abort when the tail indicator exceeds this value (<= 0 disables).
    double tail_limit = 1e-3;
    /// Abort when |relative drift| of the L2 norm / energy exceeds these (inf disables).
    double l2_drift_limit = std::numeric_limits<double>::infinity();
    double energy_drift_limit = std::numeric_limits<double>::infinity();

    void validate() const;
    /// Number of fixed steps covering [0, t_end].
    std::int64_t step_count() const;
    /// Step index a snapshot time snaps to.
    std::int64_t snapshot_step(double t) const;
};

/// stiff[s] != 0 for modes treated by the implicit-linear branch.
struct ModePartition {
    std::vector<std::uint8_t> stiff;

    bool is_stiff(std::size_t s) const { return stiff[s] != 0; }
    bool is_slow(std::size_t s) const { return stiff[s] == 0; }
    std::size_t stiff_count() const;
    std::size_t slow_count() const { return stiff.size() - stiff_count(); }
};

/// Slow where |L| < cutoff_factor / h, stiff otherwise.
ModePartition partition_modes(std::span<const std::complex<double>> symbol, double h, double cutoff_factor);

/// Coefficients of the composite scheme. Slow modes use the classical RK4
/// tableau on L + N. Stiff modes pair the same explicit tableau for N with a
/// diagonally implicit one for L that is A-stable and has R(inf) = 0, third
/// order for the combined scheme.
struct CompositeTableau {
    static constexpr std::array<std::array<double, 4>, 4> explicit_a{{
        {0.0, 0.0, 0.0, 0.0},
        {0.5, 0.0, 0.0, 0.0},
        {0.0, 0.5, 0.0, 0.0},
        {0.0, 0.0, 1.0, 0.0},
    }};
    static constexpr std::array<std::array<double, 4>, 4> implicit_a{{
        {0.0, 0.0, 0.0, 0.0},
        {-1.0 / 6.0, 2.0 / 3.0, 0.0, 0.0},
        {2.0 / 3.0, -19.0 / 24.0, 5.0 / 8.0, 0.0},
        {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
    }};
    static constexpr std::array<double, 4> b{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
};

/// Scalar amplification factor of one composite step for u' = z u / h.
std::complex<double> composite_amplification(std::complex<double> z, bool stiff);

/// The right-hand side u_t = L u + N(u) on a fixed grid, plus steppers.
class KpOperator {
public:
    KpOperator(const Grid2D& grid, double epsilon, Branch branch, bool dealias = false);

    const Grid2D& grid() const noexcept { return grid_; }
    std::span<const std::complex<double>> symbol() const noexcept { return symbol_; }

    /// Disable the nonlinear term (linear propagation checks).
    void set_linear_only(bool on) noexcept { linear_only_ = on; }

    /// out = N(uhat). Returns max |u| over the physical nodes of uhat
    /// (NaN-propagating: returns +inf on non-finite data).
    double nonlinear(std::span<const std::complex<double>> uhat, std::span<std::complex<double>> out) const;

private:
    Grid2D grid_;
    std::vector<std::complex<double>> symbol_;
    std::vector<double> nl_multiplier_;  // -kx/2 (times dealias mask), imaginary unit applied inline
    bool linear_only_ = false;
    mutable ComplexVector scratch_spec_;
    mutable RealVector scratch_phys_;
};

/// Composite RK stepper for a fixed step h and partition.
class CompositeStepper {
public:
    CompositeStepper(const KpOperator& op, double h, ModePartition partition);
    CompositeStepper(const KpOperator& op, double h, double cutoff_factor);

    const ModePartition& partition() const noexcept { return partition_; }
    double h() const noexcept { return h_; }

    /// Advance uhat in place. Returns max |u| at the start of the step.
    double step(std::span<std::complex<double>> uhat);

private:
    const KpOperator* op_;
    double h_;
    ModePartition partition_;
    std::array<std::vector<std::complex<double>>, 4> inv_diag_;
    std::array<ComplexVector, 4> n_;
    std::array<ComplexVector, 4> ly_;
    ComplexVector y_;
};

/// Integrating-factor (Lawson) RK4: classical RK4 on v = exp(-L t) uhat.
class IfRk4Stepper {
public:
    IfRk4Stepper(const KpOperator& op, double h);

    double h() const noexcept { return h_; }
    double step(std::span<std::complex<double>> uhat);

private:
    const KpOperator* op_;
    double h_;
    std::vector<std::complex<double>> e_full_;
    std::vector<std::complex<double>> e_half_;
    std::array<ComplexVector, 4> k_;
    ComplexVector stage_;
};

/// One composite step (builds the stepper on each call; use CompositeStepper in loops).
Field composite_rk_step(const KpOperator& op, const Field& uhat, double h, const ModePartition& partition);
Field if_rk4_step(const KpOperator& op, const Field& uhat, double h);

struct MonitorSample {
    double t = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
    double tail = 0.0;
};

struct RunRecord {
    std::vector<MonitorSample> monitors;
    std::vector<std::pair<double, std::int64_t>> snapshots;  ///< (time, step)
    /// Running maximum of |u| over every step (not only monitor steps).
    double peak_linf = 0.0;
    double peak_time = 0.0;
    std::int64_t steps_taken = 0;
    double wall_seconds = 0.0;
    std::optional<Field> final_state;
};

struct EvolveHooks {
    std::function<void(double t, std::int64_t step, const Field& u)> on_snapshot;
    std::function<void(const MonitorSample&)> on_monitor;
};

/// Project to zero x-mean per y-line, then step from `start_step` to the end.
/// Resuming from a snapshot taken at step k with `start_step = k` reproduces
/// the uninterrupted run exactly.
RunRecord evolve(const SolverConfig& cfg, const Field& u0, const EvolveHooks& hooks = {},
                 std::int64_t start_step = 0);

MonitorSample measure(const Field& uhat, double t, double epsilon, Branch branch);

}  // namespace dlab::kp
