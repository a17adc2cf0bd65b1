#include "dlab/analytic_solutions.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dlab/errors.hpp"
#include "dlab/special_functions.hpp"

namespace dlab::analytic {

namespace {

double sech(double z) { return 1.0 / std::cosh(z); }

void require_epsilon(double eps) {
    if (!(eps > 0.0)) throw ParameterError("epsilon must be positive, got " + std::to_string(eps));
}

}  // namespace

Branch branch_from_alpha(double alpha) {
    if (alpha == -1.0) return Branch::KPI;
    if (alpha == 1.0) return Branch::KPII;
    throw ParameterError("alpha must be +1 or -1, got " + std::to_string(alpha));
}

void CnoidalParams::validate() const {
    if (!(beta1 > beta2 && beta2 > beta3)) {
        throw ParameterError("cnoidal wave needs beta1 > beta2 > beta3");
    }
    require_epsilon(epsilon);
}

double CnoidalParams::wavenumber() const {
    return std::numbers::pi * std::sqrt(beta1 - beta3) /
           (std::sqrt(6.0) * special::complete_K(modulus()));
}

double CnoidalParams::frequency() const {
    const double k = wavenumber();
    const double l = q * k;
    return k / 3.0 * (beta1 + beta2 + beta3) + sign(branch) * l * l / k;
}

void SolitonParams::validate() const {
    if (k == 0.0) throw ParameterError("line soliton needs k != 0");
    require_epsilon(epsilon);
}

double SolitonParams::frequency() const { return 4.0 * k * k * k + sign(branch) * l * l / k; }

void LumpParams::validate() const {
    if (b == 0.0) throw ParameterError("lump needs b != 0");
    require_epsilon(epsilon);
}

double cnoidal_wave(const CnoidalParams& p, double x, double y, double t) {
    p.validate();
    const double m = p.modulus();
    const double K = special::complete_K(m);
    const double k = p.wavenumber();
    const double l = p.q * k;
    const double omega = p.frequency();
    const double z = K * (k * x + l * y - omega * t) / (std::numbers::pi * p.epsilon) + p.phase;
    const double cn = special::jacobi_cn(z, m);
    return p.beta1 + p.beta3 - p.beta2 + 2.0 * (p.beta2 - p.beta3) * cn * cn;
}

double line_soliton(const SolitonParams& p, double x, double y, double t) {
    p.validate();
    const double s = sech((p.k * x + p.l * y - p.frequency() * t + p.phase) / p.epsilon);
    return 12.0 * p.k * p.k * s * s;
}

double lump(const LumpParams& p, double x, double y, double t) {
    p.validate();
    const double eps2 = p.epsilon * p.epsilon;
    const double b2 = p.b * p.b;
    const double X = x + p.a * y + (p.a * p.a - 3.0 * b2) * t;
    const double Y = y + 2.0 * p.a * t;
    const double x2 = X * X / eps2;
    const double y2 = 3.0 * b2 * Y * Y / eps2;
    const double den = x2 + y2 + 1.0 / b2;
    return 24.0 * (-x2 + y2 + 1.0 / b2) / (den * den);
}

std::complex<double> peregrine(const BreatherParams& p, double x, double y) {
    using namespace std::complex_literals;
    const double b2 = p.b * p.b;
    const double s = x + p.a * y;
    const std::complex<double> carrier =
        std::exp(-1.0i * (p.a * x + (0.5 * p.a * p.a - b2) * y));
    const double den = 1.0 + 4.0 * b2 * s * s + 4.0 * b2 * b2 * y * y;
    return carrier * p.b * (1.0 - 4.0 * (1.0 + 2.0i * b2 * y) / den);
}

double lump_from_breather(double a, double b, double x, double y, double t) {
    const double r3 = std::sqrt(3.0);
    const BreatherParams q{a / (2.0 * r3), 0.5 * b};
    const double modulus = std::abs(peregrine(q, x - (a * a + 3.0 * b * b) * t, 2.0 * r3 * (y + 2.0 * a * t)));
    return 12.0 * modulus * modulus - 3.0 * b * b;
}

double dsw_initial(double c0, double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double s = sech(r);
    return 2.0 * c0 * (x / r) * s * s * std::tanh(r);
}

Evaluator pseudo_rotate(Evaluator u, double a, Branch branch) {
    const double alpha = sign(branch);
    return [u = std::move(u), a, alpha](double x, double y, double t) {
        return u(x + a * y - alpha * a * a * t, y - 2.0 * alpha * a * t, t);
    };
}

Evaluator as_evaluator(const CnoidalParams& p) {
    p.validate();
    return [p](double x, double y, double t) { return cnoidal_wave(p, x, y, t); };
}

Evaluator as_evaluator(const SolitonParams& p) {
    p.validate();
    return [p](double x, double y, double t) { return line_soliton(p, x, y, t); };
}

Evaluator as_evaluator(const LumpParams& p) {
    p.validate();
    return [p](double x, double y, double t) { return lump(p, x, y, t); };
}

}  // namespace dlab::analytic
