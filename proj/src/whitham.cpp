#include "dlab/whitham.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dlab/errors.hpp"
#include "dlab/special_functions.hpp"

namespace dlab::whitham {

namespace {

constexpr double kEdge = 1e-8;

}  // namespace

void CubicRoots::validate() const {
    if (!(e1 > e2 && e2 > e3)) throw ParameterError("cubic roots must satisfy e1 > e2 > e3");
}

BetaTriple beta_from_e(const CubicRoots& e) {
    e.validate();
    return {0.5 * (e.e1 + e.e2), 0.5 * (e.e1 + e.e3), 0.5 * (e.e2 + e.e3)};
}

CubicRoots e_from_beta(const BetaTriple& b) {
    if (!(b.b1 > b.b2 && b.b2 > b.b3)) throw ParameterError("levels must satisfy beta1 > beta2 > beta3");
    return {b.b1 + b.b2 - b.b3, b.b1 - b.b2 + b.b3, -b.b1 + b.b2 + b.b3};
}

void WhithamPoint::validate() const {
    if (!(beta1 >= beta2 && beta2 >= beta3 && beta1 > beta3)) {
        throw ParameterError("levels must satisfy beta1 >= beta2 >= beta3 with beta1 > beta3");
    }
}

AveragedDensities averaged_densities(const CubicRoots& r) {
    r.validate();
    if ((r.e2 - r.e3) < 1e-12 * (r.e1 - r.e3)) {
        throw DomainError("averaged_densities: e2 ~ e3, use the limit formulas");
    }
    const double mid = 0.5 * (r.e1 + r.e2);
    const double half = 0.5 * (r.e1 - r.e2);
    // Gauss-Chebyshev for int f / sqrt((e1 - eta)(eta - e2)); the remaining
    // factor 1/sqrt(eta - e3) is smooth on [e2, e1].
    auto evaluate = [&](int n) {
        double w = 0.0, wa = 0.0, wb = 0.0, wv = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double eta = mid + half * std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
            const double s = std::sqrt(eta - r.e3);
            const double g = 0.5 / s;
            w += (r.e1 - eta) * (eta - r.e2) * s;
            wa += g;
            wb += eta * g;
            wv += eta * eta * g;
        }
        const double scale = 1.0 / (std::sqrt(3.0) * n);  // (1/(sqrt3 pi)) * (pi/n)
        return AveragedDensities{w * scale, wa * scale, wb * scale, wv * scale};
    };
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
    AveragedDensities prev = evaluate(64);
    for (int n = 128; n <= (1 << 22); n *= 2) {
        const AveragedDensities cur = evaluate(n);
        const double change = std::max({rel(cur.W, prev.W), rel(cur.W_A, prev.W_A), rel(cur.W_B, prev.W_B),
                                        rel(cur.W_V, prev.W_V)});
        if (change < 1e-11) return cur;
        prev = cur;
    }
    throw DomainError("averaged_densities: quadrature did not converge (near-degenerate roots)");
}

double wavenumber_closed_form(const CubicRoots& r) {
    r.validate();
    return std::numbers::pi * std::sqrt(r.e1 - r.e3) / (2.0 * std::sqrt(3.0) * special::complete_K(r.modulus()));
}

std::array<double, 3> whitham_speeds_general(const WhithamPoint& p) {
    p.validate();
    const std::array<double, 3> b{p.beta1, p.beta2, p.beta3};
    const double m = p.modulus();
    const double ratio = special::complete_E(m) / special::complete_K(m);
    const double v3 = (b[0] + b[1] + b[2]) / 3.0;
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) {
        double prod = 1.0;
        for (int k = 0; k < 3; ++k) {
            if (k != i) prod *= b[i] - b[k];
        }
        v[i] = v3 + (2.0 / 3.0) * prod / (b[i] - b[0] + (b[0] - b[2]) * ratio);
    }
    return v;
}

std::array<double, 3> whitham_speeds(const WhithamPoint& p) {
    p.validate();
    const double m = p.modulus();
    if (m > 1.0 - kEdge) {
        const double v = (2.0 * p.beta1 + p.beta3) / 3.0;
        return {v, v, p.beta3};
    }
    if (m < kEdge) {
        const double v = 2.0 * p.beta3 - p.beta1;
        return {p.beta1, v, v};
    }
    return whitham_speeds_general(p);
}

ModulationMatrices modulation_matrices(const WhithamPoint& p) {
    const auto v = whitham_speeds(p);
    const std::array<double, 3> b{p.beta1, p.beta2, p.beta3};
    const double a = p.alpha();
    const double q = p.q;
    const double V = b[0] + b[1] + b[2];
    ModulationMatrices mm{};
    for (int i = 0; i < 3; ++i) {
        mm.A[i][i] = v[i] - a * q * q;
        mm.A[i][3] = a * q * (v[i] - 2.0 * b[i]);
        mm.B[i][i] = 2.0 * a * q;
        mm.B[i][3] = -a * (v[i] - 2.0 * b[i]);
        mm.A[3][i] = -q / 3.0;
        mm.B[3][i] = 1.0 / 3.0;
    }
    mm.A[3][3] = V / 3.0 - a * q * q;
    mm.B[3][3] = 2.0 * a * q;
    return mm;
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Hyperbolic: return "hyperbolic";
        case Classification::Elliptic: return "elliptic";
        case Classification::Mixed: return "mixed";
    }
    return "unknown";
}

PencilSpectrum pencil_spectrum(const Mat4& A, const Mat4& B, double xi) {
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) M(i, j) = A[i][j] + xi * B[i][j];
    }
    Eigen::EigenSolver<Eigen::Matrix4d> solver(M, false);
    if (solver.info() != Eigen::Success) throw Error("pencil_spectrum: eigenvalue iteration failed");
    PencilSpectrum out{};
    double scale = 1.0;
    for (int i = 0; i < 4; ++i) {
        out.eigenvalues[i] = solver.eigenvalues()[i];
        scale = std::max(scale, std::abs(out.eigenvalues[i]));
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    int complex_count = 0;
    for (const cplx& z : out.eigenvalues) {
        if (std::abs(z.imag()) >= 1e-9 * scale) ++complex_count;
    }
    out.classification = complex_count == 0   ? Classification::Hyperbolic
                         : complex_count == 4 ? Classification::Elliptic
                                              : Classification::Mixed;
    return out;
}

std::pair<cplx, cplx> soliton_system_eigs(double a, double q, double xi, Branch branch) {
    if (!(a > 0.0)) throw DomainError("soliton_system_eigs: amplitude must be positive");
    const double al = analytic::sign(branch);
    const double centre = a / 3.0 - al * q * q + 2.0 * xi * al * q;
    const cplx root = std::sqrt(cplx(al * a * (q - xi) * (q - xi), 0.0));
    return {centre + (2.0 / 3.0) * root, centre - (2.0 / 3.0) * root};
}

double p3_discriminant_at_beta3_zero(double beta1, double q, double xi, Branch branch) {
    if (!(beta1 > 0.0)) throw DomainError("p3_discriminant: beta1 must be positive");
    const double al = analytic::sign(branch);
    const double f = beta1 - 2.0 * xi * al + 4.0 * xi * al * q - 2.0 * al * q * q;
    return al * (xi - q) * (xi - q) * beta1 * beta1 * beta1 * f * f;
}

std::optional<double> riemann_q_init(const spectral::Field& u0, double x, double y) {
    const spectral::Field uhat = spectral::to_spectral(u0);
    const auto& g = uhat.grid();
    std::vector<cplx> ex(static_cast<std::size_t>(g.nkx()));
    std::vector<cplx> ey(static_cast<std::size_t>(g.ny()));
    for (int i = 0; i < g.nkx(); ++i) ex[i] = std::polar(1.0, g.kx_half(i) * (x + g.lx()));
    for (int j = 0; j < g.ny(); ++j) ey[j] = std::polar(1.0, g.ky()[j] * (y + g.ly()));
    double u = 0.0;
    double w = 0.0;
    double umax = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        const double ky = g.is_y_nyquist(j) ? 0.0 : g.ky()[j];
        for (int i = 0; i < g.nkx(); ++i) {
            const double weight = (i == 0 || g.is_x_nyquist(i)) ? 1.0 : 2.0;
            const cplx c = uhat.mode(i, j) * ex[i] * ey[j];
            u += weight * c.real();
            if (i != 0 && !g.is_x_nyquist(i)) w += weight * (c * (ky / g.kx_half(i))).real();
        }
    }
    const double n = static_cast<double>(g.physical_size());
    u /= n;
    w /= n;
    for (double v : spectral::to_physical(u0).values()) umax = std::max(umax, std::abs(v));
    if (!(std::abs(u) >= 1e-8 * umax) || umax == 0.0) return std::nullopt;
    return w / u;
}

}  // namespace dlab::whitham
