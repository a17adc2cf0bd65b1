#include "dlab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/summation.hpp"

namespace dlab::spectral {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

template <class F>
Field apply_multiplier(const Field& f, F&& multiplier) {
    f.require(Repr::Spectral);
    const Grid2D& g = f.grid();
    Field out = Field::spectral(g);
    auto in = f.modes();
    auto res = out.modes();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nkx(); ++i) {
            const std::size_t s = g.spectral_index(i, j);
            res[s] = multiplier(i, j) * in[s];
        }
    }
    return out;
}

}  // namespace

std::vector<std::complex<double>> linear_symbol(const Grid2D& g, double epsilon, Branch branch) {
    if (!(epsilon > 0.0)) throw ParameterError("linear_symbol: epsilon must be positive");
    const double alpha = analytic::sign(branch);
    const double e2 = epsilon * epsilon;
    std::vector<cplx> L(g.spectral_size(), 0.0);
    for (int j = 0; j < g.ny(); ++j) {
        const double ky = g.ky()[static_cast<std::size_t>(j)];
        for (int i = 1; i < g.nkx(); ++i) {
            if (g.is_x_nyquist(i)) continue;
            const double kx = g.kx_half(i);
            L[g.spectral_index(i, j)] = cplx(0.0, -alpha * ky * ky / kx + e2 * kx * kx * kx);
        }
    }
    return L;
}

std::vector<double> dealias_mask(const Grid2D& g) {
    std::vector<double> mask(g.spectral_size(), 0.0);
    const int cx = g.nx() / 3;
    const int cy = g.ny() / 3;
    for (int j = 0; j < g.ny(); ++j) {
        const int sj = j < g.ny() / 2 ? j : j - g.ny();
        for (int i = 0; i < g.nkx(); ++i) {
            if (i <= cx && std::abs(sj) <= cy) mask[g.spectral_index(i, j)] = 1.0;
        }
    }
    return mask;
}

Field nonlinear_term(const Field& u, bool dealias) {
    u.require(Repr::Physical);
    const Grid2D& g = u.grid();
    Field sq = Field::physical(g);
    auto uv = u.values();
    auto sv = sq.values();
    for (std::size_t k = 0; k < uv.size(); ++k) sv[k] = uv[k] * uv[k];
    Field out = transform(sq);
    std::vector<double> mask;
    if (dealias) mask = dealias_mask(g);
    auto m = out.modes();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nkx(); ++i) {
            const std::size_t s = g.spectral_index(i, j);
            const double kx = g.is_x_nyquist(i) ? 0.0 : g.kx_half(i);
            m[s] *= -0.5 * I * kx * (dealias ? mask[s] : 1.0);
        }
    }
    return out;
}

Field antiderivative_x(const Field& f) {
    const Grid2D& g = f.grid();
    return apply_multiplier(f, [&g](int i, int) -> cplx {
        if (i == 0 || g.is_x_nyquist(i)) return 0.0;
        return -I / g.kx_half(i);
    });
}

Field derivative_x(const Field& f) {
    const Grid2D& g = f.grid();
    return apply_multiplier(f, [&g](int i, int) -> cplx {
        if (g.is_x_nyquist(i)) return 0.0;
        return I * g.kx_half(i);
    });
}

Field derivative_y(const Field& f) {
    const Grid2D& g = f.grid();
    return apply_multiplier(f, [&g](int, int j) -> cplx {
        if (g.is_y_nyquist(j)) return 0.0;
        return I * g.ky()[static_cast<std::size_t>(j)];
    });
}

double l2_norm(const Field& f) {
    const Grid2D& g = f.grid();
    const double cell = g.dx() * g.dy();
    if (f.is_physical()) {
        const double s = pairwise_sum(f.values(), [](double v) { return v * v; });
        return std::sqrt(cell * s);
    }
    // Parseval on the half spectrum: interior columns stand for two modes.
    std::vector<double> weighted(g.spectral_size());
    auto m = f.modes();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nkx(); ++i) {
            const std::size_t s = g.spectral_index(i, j);
            const double w = (i == 0 || g.is_x_nyquist(i)) ? 1.0 : 2.0;
            weighted[s] = w * std::norm(m[s]);
        }
    }
    const double n = static_cast<double>(g.physical_size());
    return std::sqrt(cell * pairwise_sum(std::span<const double>(weighted)) / n);
}

double linf_norm(const Field& f) {
    const Field p = to_physical(f);
    double mx = 0.0;
    for (double v : p.values()) mx = std::max(mx, std::abs(v));
    return mx;
}

double hamiltonian(const Field& f, double epsilon, Branch branch) {
    const Field spec = to_spectral(f);
    const Field u = to_physical(f);
    const Field ux = transform(derivative_x(spec));
    const Field w = transform(antiderivative_x(derivative_y(spec)));
    const double alpha = analytic::sign(branch);
    const double e2 = epsilon * epsilon;
    const Grid2D& g = f.grid();
    std::vector<double> density(g.physical_size());
    auto uv = u.values();
    auto uxv = ux.values();
    auto wv = w.values();
    for (std::size_t k = 0; k < density.size(); ++k) {
        density[k] = uv[k] * uv[k] * uv[k] / 6.0 - 0.5 * e2 * uxv[k] * uxv[k] + 0.5 * alpha * wv[k] * wv[k];
    }
    return g.dx() * g.dy() * pairwise_sum(std::span<const double>(density));
}

double tail_indicator(const Field& f) {
    f.require(Repr::Spectral);
    const Grid2D& g = f.grid();
    double kmax2 = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        const double ky = g.ky()[static_cast<std::size_t>(j)];
        for (int i = 0; i < g.nkx(); ++i) kmax2 = std::max(kmax2, g.kx_half(i) * g.kx_half(i) + ky * ky);
    }
    const double threshold2 = 0.81 * kmax2;
    double global = 0.0;
    double tail = 0.0;
    auto m = f.modes();
    for (int j = 0; j < g.ny(); ++j) {
        const double ky = g.ky()[static_cast<std::size_t>(j)];
        for (int i = 0; i < g.nkx(); ++i) {
            const double a = std::abs(m[g.spectral_index(i, j)]);
            global = std::max(global, a);
            if (g.kx_half(i) * g.kx_half(i) + ky * ky >= threshold2) tail = std::max(tail, a);
        }
    }
    return global > 0.0 ? tail / global : 0.0;
}

void project_zero_x_mean(Field& f) {
    const Grid2D& g = f.grid();
    auto m = f.modes();
    for (int j = 0; j < g.ny(); ++j) {
        m[g.spectral_index(0, j)] = 0.0;
        m[g.spectral_index(g.nkx() - 1, j)] = 0.0;
    }
}

}  // namespace dlab::spectral
