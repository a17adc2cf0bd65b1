#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "dlab/analytic_solutions.hpp"
#include "dlab/errors.hpp"
#include "dlab/kp_solver.hpp"
#include "dlab/spectral_ops.hpp"

using namespace dlab;
using namespace dlab::kp;
using cplx = std::complex<double>;

namespace {

double max_diff(const Field& a, const Field& b) {
    const Field pa = spectral::to_physical(a), pb = spectral::to_physical(b);
    double d = 0;
    for (std::size_t k = 0; k < pa.values().size(); ++k) d = std::max(d, std::abs(pa.values()[k] - pb.values()[k]));
    return d;
}

Field projected(Field f) {
    Field s = spectral::to_spectral(f);
    spectral::project_zero_x_mean(s);
    return s;
}

SolverConfig small_config(double eps, double h, double t_end, int n = 32) {
    SolverConfig c;
    c.epsilon = eps;
    c.h = h;
    c.t_end = t_end;
    c.grid = {n, n, 5 * M_PI, 5 * M_PI};
    c.monitor_stride = 1;
    c.tail_limit = 0;
    return c;
}

}  // namespace

TEST_CASE("partition examples") {
    const Grid2D g(64, 64, 5 * M_PI, 5 * M_PI);
    const auto sym = spectral::linear_symbol(g, 0.1, Branch::KPI);
    const auto p = partition_modes(sym, 2e-4, 1.0 / 128);
    CHECK(1.0 / 128 / 2e-4 == doctest::Approx(39.0625));
    for (std::size_t s = 0; s < sym.size(); ++s) CHECK(p.is_slow(s) == (std::abs(sym[s]) < 39.0625));
    CHECK(p.slow_count() + p.stiff_count() == sym.size());

    const auto inf = partition_modes(sym, 1e300, 1.0 / 128);
    for (std::size_t s = 0; s < sym.size(); ++s) {
        if (std::abs(sym[s]) > 0) CHECK(inf.is_stiff(s));
    }
    const std::vector<cplx> zero(sym.size(), 0.0);
    CHECK(partition_modes(zero, 1e-3, 1.0 / 128).stiff_count() == 0);
    const auto dr = partition_modes(sym, 1e-3, 2.8);
    CHECK(dr.slow_count() > partition_modes(sym, 1e-3, 1.0 / 128).slow_count());
    CHECK_THROWS_AS(partition_modes(sym, 0.0, 1.0), ParameterError);
}

TEST_CASE("scalar amplification factors") {
    // slow modes: classical RK4 polynomial, local error O(z^5)
    for (cplx z : {cplx(0, 0.1), cplx(-0.05, 0.08)}) {
        const double e1 = std::abs(composite_amplification(z, false) - std::exp(z));
        const double e2 = std::abs(composite_amplification(z / 2.0, false) - std::exp(z / 2.0));
        CHECK(std::log2(e1 / e2) == doctest::Approx(5.0).epsilon(0.05));
        CHECK(std::abs(composite_amplification(z, false) - (1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0)) <
              1e-15);
    }
    // stiff modes: A-stable and L-stable
    double worst = 0;
    for (double r = 1e-3; r < 1e8; r *= 1.1) {
        for (double th = M_PI / 2; th <= 3 * M_PI / 2 + 1e-12; th += M_PI / 40) {
            worst = std::max(worst, std::abs(composite_amplification(std::polar(r, th), true)));
        }
    }
    CHECK(worst <= 1.0 + 1e-12);
    CHECK(std::abs(composite_amplification(cplx(0, 1e9), true)) < 1e-6);
    CHECK(std::abs(composite_amplification(cplx(-1e9, 0), true)) < 1e-6);
    // third order on the linear part
    const cplx z(0, 0.02);
    const double e1 = std::abs(composite_amplification(z, true) - std::exp(z));
    const double e2 = std::abs(composite_amplification(z / 2.0, true) - std::exp(z / 2.0));
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("linear propagation") {
    const Grid2D g(32, 32, 5 * M_PI, 5 * M_PI);
    KpOperator op(g, 0.5, Branch::KPI);
    op.set_linear_only(true);
    const Field u0 = projected(Field::from_function(g, [](double x, double y) { return analytic::dsw_initial(2, x, y); }));
    const double h = 1e-2;

    // all slow: RK4 polynomial per mode
    ModePartition slow{std::vector<std::uint8_t>(g.spectral_size(), 0)};
    const Field a = composite_rk_step(op, u0, h, slow);
    ModePartition stiff{std::vector<std::uint8_t>(g.spectral_size(), 1)};
    const Field b = composite_rk_step(op, u0, h, stiff);
    const Field c = if_rk4_step(op, u0, h);
    double ea = 0, eb = 0, ec = 0;
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
        const cplx z = op.symbol()[s] * h;
        ea = std::max(ea, std::abs(a.modes()[s] - composite_amplification(z, false) * u0.modes()[s]));
        eb = std::max(eb, std::abs(b.modes()[s] - composite_amplification(z, true) * u0.modes()[s]));
        ec = std::max(ec, std::abs(c.modes()[s] - std::exp(z) * u0.modes()[s]));
    }
    const double scale = std::abs(u0.modes()[g.spectral_index(1, 0)]) + 1;
    CHECK(ea < 1e-13 * scale);
    CHECK(eb < 1e-13 * scale);
    CHECK(ec < 1e-13 * scale);
}

TEST_CASE("zero data stays zero") {
    const Grid2D g(16, 16, 5 * M_PI, 5 * M_PI);
    KpOperator op(g, 0.3, Branch::KPI);
    const Field z = Field::spectral(g);
    ModePartition p = partition_modes(op.symbol(), 1e-3, 1.0 / 128);
    const Field a = composite_rk_step(op, z, 1e-3, p), b = if_rk4_step(op, z, 1e-3);
    for (const auto& v : a.modes()) CHECK(v == cplx(0));
    for (const auto& v : b.modes()) CHECK(v == cplx(0));

    auto cfg = small_config(0.3, 1e-3, 0.01, 16);
    const RunRecord rec = evolve(cfg, Field::physical(cfg.grid.make()));
    CHECK(rec.monitors.size() == 11);
    for (const auto& m : rec.monitors) {
        CHECK(m.linf == 0.0);
        CHECK(m.l2 == 0.0);
        CHECK(m.energy == 0.0);
    }
}

TEST_CASE("step doubling on lump data") {
    const Grid2D g(64, 64, 5 * M_PI, 5 * M_PI);
    KpOperator op(g, 1.0, Branch::KPI);
    const Field u0 = projected(Field::from_function(g, [](double x, double y) { return analytic::lump({0, 1, 1}, x, y, 0); }));
    auto gap = [&](double h) {
        // same partition for both step sizes so only h changes
        const auto pf = partition_modes(op.symbol(), h, 1.0 / 128);
        const Field one = composite_rk_step(op, u0, h, pf);
        const Field two = composite_rk_step(op, composite_rk_step(op, u0, h / 2, pf), h / 2, pf);
        return max_diff(one, two);
    };
    const double g1 = gap(2e-3), g2 = gap(1e-3);
    CHECK(std::log2(g1 / g2) > 3.5);
}

TEST_CASE("integrating factor and composite agree to fourth order") {
    auto cfg = small_config(0.5, 0.01, 0.1);
    cfg.cutoff_factor = 2.8;
    const Field u0 = Field::from_function(cfg.grid.make(), [](double x, double y) { return analytic::dsw_initial(1, x, y); });
    auto run = [&](double h, Integrator it) {
        auto c = cfg;
        c.h = h;
        c.integrator = it;
        return *evolve(c, u0).final_state;
    };
    const double d1 = max_diff(run(0.01, Integrator::Composite), run(0.01, Integrator::IntegratingFactor));
    const double d2 = max_diff(run(0.005, Integrator::Composite), run(0.005, Integrator::IntegratingFactor));
    CHECK(d1 < 1e-3);
    CHECK(std::log2(d1 / d2) > 3.5);
}

TEST_CASE("temporal convergence") {
    auto cfg = small_config(0.5, 0.01, 0.1);
    const Field u0 = Field::from_function(cfg.grid.make(), [](double x, double y) { return analytic::dsw_initial(1, x, y); });
    for (double cutoff : {2.8, 1.0 / 128}) {
        auto run = [&](double h) {
            auto c = cfg;
            c.h = h;
            c.cutoff_factor = cutoff;
            return *evolve(c, u0).final_state;
        };
        const Field ref = run(0.01 / 8);
        const double e0 = max_diff(run(0.01), ref), e2 = max_diff(run(0.0025), ref);
        const double order = 0.5 * std::log2(e0 / e2);
        MESSAGE("cutoff " << cutoff << ": observed order " << order);
        CHECK(order > (cutoff > 1 ? 3.5 : 2.8));
    }
}

TEST_CASE("KPII with y-independent data reduces to KdV") {
    // single y-mode plane: a 2D run must equal a run on a 1-row-equivalent grid
    auto c2 = small_config(0.4, 5e-3, 0.2, 64);
    c2.branch = Branch::KPII;
    c2.grid = {64, 8, 5 * M_PI, 1.0};
    auto c1 = c2;
    c1.grid = {64, 16, 5 * M_PI, 3.0};
    const auto f = [](double x, double) { return -2 * std::tanh(x) / std::pow(std::cosh(x), 2); };
    const Field a = spectral::to_physical(*evolve(c2, Field::from_function(c2.grid.make(), f)).final_state);
    const Field b = spectral::to_physical(*evolve(c1, Field::from_function(c1.grid.make(), f)).final_state);
    double d = 0, spread = 0;
    for (int i = 0; i < 64; ++i) {
        d = std::max(d, std::abs(a.at(i, 0) - b.at(i, 5)));
        for (int j = 0; j < 8; ++j) spread = std::max(spread, std::abs(a.at(i, j) - a.at(i, 0)));
    }
    CHECK(d < 1e-8);
    CHECK(spread < 1e-12);
}

TEST_CASE("evolve bookkeeping") {
    auto cfg = small_config(0.5, 0.01, 0.1);
    cfg.snapshot_times = {0.03, 0.1, 0.0};
    cfg.monitor_stride = 4;
    const Field u0 = Field::from_function(cfg.grid.make(), [](double x, double y) { return analytic::dsw_initial(1, x, y); });
    std::vector<std::int64_t> seen;
    EvolveHooks hooks;
    hooks.on_snapshot = [&](double, std::int64_t step, const Field&) { seen.push_back(step); };
    const RunRecord rec = evolve(cfg, u0, hooks);
    CHECK(seen == std::vector<std::int64_t>{0, 3, 10});
    CHECK(rec.steps_taken == 10);
    REQUIRE(rec.monitors.size() == 4);  // steps 0, 4, 8 and the final step
    CHECK(rec.monitors.back().t == doctest::Approx(0.1));
    for (std::size_t k = 1; k < rec.monitors.size(); ++k) CHECK(rec.monitors[k].t > rec.monitors[k - 1].t);
    CHECK(rec.peak_linf >= rec.monitors.front().linf);

    // deterministic
    const RunRecord again = evolve(cfg, u0);
    for (std::size_t k = 0; k < rec.monitors.size(); ++k) {
        CHECK(rec.monitors[k].linf == again.monitors[k].linf);
        CHECK(rec.monitors[k].energy == again.monitors[k].energy);
    }

    // resume from the step-3 snapshot reproduces the straight run
    Field snap = Field::physical(cfg.grid.make());
    EvolveHooks grab;
    grab.on_snapshot = [&](double, std::int64_t step, const Field& u) {
        if (step == 3) snap = spectral::to_physical(u);
    };
    evolve(cfg, u0, grab);
    const RunRecord resumed = evolve(cfg, snap, {}, 3);
    CHECK(max_diff(*resumed.final_state, *rec.final_state) < 1e-12);
}

TEST_CASE("failure modes") {
    auto cfg = small_config(0.5, 0.01, 0.1);
    cfg.h = -1;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = small_config(0.5, 0.01, 0.1);
    cfg.snapshot_times = {0.2};
    CHECK_THROWS_AS(cfg.validate(), ParameterError);

    // a huge step on large data blows up
    cfg = small_config(0.1, 0.5, 5.0);
    const Field big = Field::from_function(cfg.grid.make(), [](double x, double y) { return analytic::dsw_initial(50, x, y); });
    CHECK_THROWS_AS(evolve(cfg, big), BlowUpError);

    // steep data on a coarse grid trips the resolution monitor
    cfg = small_config(0.05, 1e-3, 0.05, 16);
    cfg.tail_limit = 1e-3;
    CHECK_THROWS_AS(evolve(cfg, Field::from_function(cfg.grid.make(), [](double x, double y) {
                        return analytic::dsw_initial(6, x, y);
                    })),
                    ResolutionLossError);

    cfg = small_config(0.5, 0.05, 0.5);
    cfg.l2_drift_limit = 1e-14;
    CHECK_THROWS_AS(evolve(cfg, Field::from_function(cfg.grid.make(), [](double x, double y) {
                        return analytic::dsw_initial(2, x, y);
                    })),
                    DriftError);
    try {
        evolve(cfg, Field::from_function(cfg.grid.make(), [](double x, double y) { return analytic::dsw_initial(2, x, y); }));
    } catch (const NumericalError& e) {
        CHECK(e.last_good_time() >= 0.0);
    }
}
