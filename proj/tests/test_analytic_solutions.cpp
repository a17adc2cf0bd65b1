#include <doctest.h>

#include <cmath>
#include <random>

#include "dlab/analytic_solutions.hpp"
#include "dlab/errors.hpp"
#include "dlab/special_functions.hpp"
#include "oracles.hpp"

using namespace dlab::analytic;

namespace {

double kp_res(const Evaluator& u, double x, double y, double t, double eps, Branch br) {
    return oracle::kp_residual(u, x, y, t, eps, sign(br), 0.04, 8);
}

}  // namespace

TEST_CASE("cnoidal extremes and limits") {
    CnoidalParams p{3.0, 2.0, 1.0, 0.0, 0.0, 1.0, Branch::KPII};
    CHECK(cnoidal_wave(p, 0.0, 0.0, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
    const double kk = dlab::special::complete_K(p.modulus());
    const double x_trough = M_PI * p.epsilon / (p.wavenumber());  // argument reaches K
    CHECK(cnoidal_wave(p, x_trough, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.wavenumber() == doctest::Approx(M_PI * std::sqrt(2.0) / (std::sqrt(6.0) * kk)).epsilon(1e-14));

    CnoidalParams flat{3.0, 1.0 + 1e-14, 1.0, 0.2, 0.0, 0.5, Branch::KPI};
    for (double x = -3; x < 3; x += 0.7) CHECK(std::abs(cnoidal_wave(flat, x, 0.3, 0.1) - 3.0) < 1e-12);

    CHECK_THROWS_AS((CnoidalParams{1.0, 2.0, 0.0}.validate()), dlab::ParameterError);
    CHECK_THROWS_AS(cnoidal_wave(CnoidalParams{1.0, 1.0, 1.0}, 0, 0, 0), dlab::ParameterError);
}

TEST_CASE("line soliton") {
    SolitonParams s{1.0, 0.0, 0.0, 1.0, Branch::KPI};
    CHECK(s.frequency() == doctest::Approx(4.0));
    s.branch = Branch::KPII;
    CHECK(s.frequency() == doctest::Approx(4.0));
    SolitonParams s2{0.7, 0.3, 0.4, 0.5, Branch::KPI};
    // peak where the phase vanishes
    const double x0 = (s2.frequency() * 0.3 - s2.phase) / s2.k;
    CHECK(line_soliton(s2, x0, 0.0, 0.3) == doctest::Approx(12 * 0.49).epsilon(1e-14));
    CHECK(line_soliton(s2, 60.0, 0.0, 0.3) < 1e-50);
    CHECK_THROWS_AS(line_soliton(SolitonParams{0.0}, 0, 0, 0), dlab::ParameterError);
}

TEST_CASE("lump values and trajectory") {
    LumpParams p{0.0, 1.0, 1.0};
    CHECK(lump(p, 0, 0, 0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(std::abs(lump(p, 1, 0, 0)) < 1e-15);
    LumpParams q{1.0, 1.0, 1.0};
    const double peak = lump(q, 8.0, -4.0, 2.0);
    CHECK(peak == doctest::Approx(24.0).epsilon(1e-14));
    for (double dx : {-0.01, 0.01}) {
        CHECK(lump(q, 8.0 + dx, -4.0, 2.0) < peak);
        CHECK(lump(q, 8.0, -4.0 + dx, 2.0) < peak);
    }
    // algebraic r^-2 decay
    const double r1 = lump(p, 0, 100, 0), r2 = lump(p, 0, 200, 0);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(1e-3));
    CHECK_THROWS_AS(lump(LumpParams{0.0, 0.0, 1.0}, 0, 0, 0), dlab::ParameterError);
}

TEST_CASE("Peregrine breather") {
    CHECK(std::abs(peregrine({0.0, 1.0}, 0, 0)) == doctest::Approx(3.0));
    CHECK(std::abs(peregrine({0.4, 2.0}, 0, 0)) == doctest::Approx(6.0));
    CHECK(std::abs(peregrine({0.0, 1.0}, 1, 0)) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(std::abs(std::abs(peregrine({0.0, 1.0}, 1e4, 0)) - 1.0) < 1e-7);
    CHECK(std::abs(std::abs(peregrine({0.3, 1.5}, -1e4, 2.0)) - 1.5) < 1e-6);
}

TEST_CASE("lump from breather equals lump") {
    CHECK(lump_from_breather(0, 1, 0, 0, 0) == doctest::Approx(24.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5), ua(-2, 2), ub(0.3, 2.5);
    for (int k = 0; k < 100; ++k) {
        const double a = ua(rng), b = ub(rng), x = u(rng), y = u(rng), t = 0.2 * u(rng);
        const double ref = lump({a, b, 1.0}, x, y, t);
        CHECK(std::abs(lump_from_breather(a, b, x, y, t) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
    CHECK(lump_from_breather(1, 2, 0.3, -0.7, 0.1) == doctest::Approx(lump({1, 2, 1}, 0.3, -0.7, 0.1)).epsilon(1e-13));
}

TEST_CASE("DSW initial datum") {
    CHECK(dsw_initial(6, 0, 0) == 0.0);
    for (double x = -2; x < 2; x += 0.31) {
        CHECK(dsw_initial(6, -x, 0.4) == doctest::Approx(-dsw_initial(6, x, 0.4)));
    }
    const double ref = oracle::maximize([](double x) { return 12 * std::pow(oracle::sech(x), 2) * std::tanh(x); }, 0, 3);
    CHECK(ref == doctest::Approx(8.0 / std::sqrt(3.0)).epsilon(1e-12));
    double best = 0;
    for (double x = 0.5; x < 0.8; x += 1e-5) best = std::max(best, dsw_initial(6, x, 0));
    CHECK(best == doctest::Approx(ref).epsilon(1e-8));
    // matches the radial derivative oracle off the axis
    const double x = 0.7, y = -0.4, h = 1e-5;
    const auto s2 = [](double a, double b) { return std::pow(oracle::sech(std::hypot(a, b)), 2); };
    CHECK(dsw_initial(2.5, x, y) == doctest::Approx(-2.5 * (s2(x + h, y) - s2(x - h, y)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("pseudo-rotation") {
    const LumpParams p{0.5, 1.2, 1.0};
    const auto id = pseudo_rotate(as_evaluator(p), 0.0, Branch::KPI);
    CHECK(id(0.3, 0.2, 0.1) == lump(p, 0.3, 0.2, 0.1));

    for (Branch br : {Branch::KPI, Branch::KPII}) {
        const SolitonParams s{0.8, 0.0, 0.1, 0.7, br};
        const double a = 0.6;
        const auto rot = pseudo_rotate(as_evaluator(s), a, br);
        const SolitonParams s2{0.8, a * 0.8, 0.1, 0.7, br};
        for (double x = -2; x < 2; x += 0.5) {
            CHECK(rot(x, 0.7 * x, 0.3) == doctest::Approx(line_soliton(s2, x, 0.7 * x, 0.3)).epsilon(1e-13));
        }
    }

    // group law: T_b T_a = T_{a+b}, so T_{-a} T_a is the identity
    const auto there = pseudo_rotate(as_evaluator(p), 0.7, Branch::KPI);
    const auto back = pseudo_rotate(there, -0.7, Branch::KPI);
    const auto twice = pseudo_rotate(there, 0.4, Branch::KPI);
    const auto once = pseudo_rotate(as_evaluator(p), 1.1, Branch::KPI);
    for (double x = -2; x < 2; x += 0.5) {
        CHECK(back(x, 1.0, 1.0) == doctest::Approx(lump(p, x, 1.0, 1.0)).epsilon(1e-12));
        CHECK(twice(x, -0.5, 0.8) == doctest::Approx(once(x, -0.5, 0.8)).epsilon(1e-12));
    }
}

TEST_CASE("property: closed-form families satisfy the KP equation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const double x = u(rng), y = u(rng), t = 0.25 * u(rng);
        const CnoidalParams c{1.0 + 0.1 * u(rng), 0.5 + 0.1 * u(rng), 0.0, 0.2 * u(rng), 0.3, 1.0,
                              k % 2 ? Branch::KPI : Branch::KPII};
        worst = std::max(worst, std::abs(kp_res(as_evaluator(c), x, y, t, c.epsilon, c.branch)));
        const SolitonParams s{0.5 + 0.1 * u(rng), 0.3 * u(rng), 0.2, 1.0, k % 2 ? Branch::KPI : Branch::KPII};
        worst = std::max(worst, std::abs(kp_res(as_evaluator(s), x, y, t, s.epsilon, s.branch)));
        const LumpParams l{0.3 * u(rng), 0.5 + 0.05 * u(rng), 1.0};
        worst = std::max(worst, std::abs(kp_res(as_evaluator(l), 2 * x, 2 * y, t, 1.0, Branch::KPI)));
        const auto rot = pseudo_rotate(as_evaluator(l), 0.4, Branch::KPI);
        worst = std::max(worst, std::abs(kp_res(rot, 2 * x, 2 * y, t, 1.0, Branch::KPI)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("property: cnoidal tends to the soliton as m -> 1") {
    // beta1 - beta3 = 1, m = 1 - 1e-10: trough level beta1 - beta2 + beta3 -> beta3 and the
    // crest sits on a sech^2 of amplitude 2(beta2 - beta3).
    const double eps = 1.0, m = 1 - 1e-10;
    const CnoidalParams c{1.0, m, 0.0, 0.0, 0.0, eps, Branch::KPII};
    const double amp = 2 * (c.beta2 - c.beta3);
    const double ks = std::sqrt(amp / 12.0);
    const double s = dlab::special::complete_K(m) * c.wavenumber() / (M_PI * eps);
    double diff = 0;
    for (double x = -3; x <= 3; x += 0.01) {
        const double sol = (c.beta1 - c.beta2 + c.beta3) + amp * std::pow(oracle::sech(s * x), 2);
        diff = std::max(diff, std::abs(cnoidal_wave(c, x, 0, 0) - sol));
    }
    CHECK(diff < 1e-3);
    CHECK(s == doctest::Approx(ks / eps).epsilon(1e-3));
}
