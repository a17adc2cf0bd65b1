#include "dlab/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dlab/errors.hpp"

namespace dlab::special {

namespace {

constexpr int kMaxAgmSteps = 40;

}  // namespace

EllipticModulus::EllipticModulus(double m) : m_(m) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw DomainError("elliptic parameter m=" + std::to_string(m) + " outside [0,1]");
    }
}

double complete_K(EllipticModulus mod) {
    const double m = mod.value();
    if (m >= 1.0) throw DomainError("K(m) diverges at m=1");
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    for (int n = 0; n < kMaxAgmSteps && std::abs(a - b) > 1e-16 * a; ++n) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

double complete_K(double m) { return complete_K(EllipticModulus(m)); }

double complete_E(EllipticModulus mod) {
    const double m = mod.value();
    if (m == 1.0) return 1.0;
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    // sum_{n>=0} 2^{n-1} c_n^2 with c_0^2 = m
    double sum = 0.5 * m;
    double weight = 0.5;
    for (int n = 0; n < kMaxAgmSteps; ++n) {
        const double c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        weight *= 2.0;
        sum += weight * c * c;
        if (std::abs(c) <= 1e-17 * a) break;
    }
    const double K = std::numbers::pi / (2.0 * a);
    return K * (1.0 - sum);
}

double complete_E(double m) { return complete_E(EllipticModulus(m)); }

JacobiSnCnDn jacobi_sncndn(double z, EllipticModulus mod) {
    if (!std::isfinite(z)) throw DomainError("jacobi_sncndn: non-finite argument");
    const double m = mod.value();
    if (m == 1.0) {
        const double s = 1.0 / std::cosh(z);
        return {std::tanh(z), s, s};
    }
    if (m == 0.0) return {std::sin(z), std::cos(z), 1.0};

    // Reduce to one real period [-2K, 2K) so the Landen ladder works on a
    // bounded angle.
    const double K = complete_K(mod);
    const double period = 4.0 * K;
    z = z - period * std::floor(z / period + 0.5);

    std::array<double, kMaxAgmSteps + 1> a{};
    std::array<double, kMaxAgmSteps + 1> c{};
    a[0] = 1.0;
    double b = std::sqrt(1.0 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (n < kMaxAgmSteps && std::abs(c[n]) > 1e-16 * a[n]) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * z, n);
    for (int k = n; k > 0; --k) {
        phi = 0.5 * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(1.0 - m * sn * sn);
    return {sn, cn, dn};
}

double jacobi_cn(double z, EllipticModulus m) { return jacobi_sncndn(z, m).cn; }

double jacobi_cn(double z, double m) { return jacobi_cn(z, EllipticModulus(m)); }

}  // namespace dlab::special
