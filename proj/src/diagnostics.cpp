#include "dlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "dlab/analytic_solutions.hpp"
#include "dlab/errors.hpp"

namespace dlab::diag {

namespace {

using Residuals = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J)>;

// Levenberg-Marquardt with Marquardt scaling; lambda x10 on rejection, /10 on
// acceptance.
FitResult levenberg_marquardt(const Residuals& fn, Eigen::VectorXd p, int max_iter = 100, double step_tol = 1e-10) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    fn(p, r, J);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    FitResult out;
    Eigen::VectorXd r_try;
    Eigen::MatrixXd J_try;
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        if (g.norm() <= 1e-14 * (1.0 + cost) || cost == 0.0) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        Eigen::VectorXd delta;
        while (lambda < 1e16) {
            Eigen::MatrixXd lhs = JtJ;
            for (Eigen::Index k = 0; k < lhs.rows(); ++k) lhs(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
            delta = lhs.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd p_try = p + delta;
            fn(p_try, r_try, J_try);
            const double c_try = r_try.allFinite() ? r_try.squaredNorm() : std::numeric_limits<double>::infinity();
            if (c_try <= cost) {
                p = p_try;
                r.swap(r_try);
                J.swap(J_try);
                cost = c_try;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
        if (delta.norm() <= step_tol * (p.norm() + step_tol)) {
            out.converged = true;
            break;
        }
    }
    out.params.assign(p.data(), p.data() + p.size());
    const auto n = r.size();
    const auto np = p.size();
    out.residual_rms = n > 0 ? std::sqrt(cost / static_cast<double>(n)) : 0.0;
    out.stderr_proxy.assign(static_cast<std::size_t>(np), std::numeric_limits<double>::quiet_NaN());
    if (n > np) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
        if (lu.isInvertible()) {
            const Eigen::MatrixXd cov = lu.inverse() * (cost / static_cast<double>(n - np));
            for (Eigen::Index k = 0; k < np; ++k) out.stderr_proxy[k] = std::sqrt(std::max(cov(k, k), 0.0));
        }
    }
    return out;
}

double lump_value(double a, double b, double eps, double xi, double eta) {
    return analytic::lump({a, std::abs(b), eps}, xi, eta, 0.0);
}

}  // namespace

std::vector<Peak> find_peaks(const Field& f, double rel_threshold) {
    f.require(spectral::Repr::Physical);
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw ParameterError("rel_threshold must lie in (0, 1)");
    const auto& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    auto at = [&](int i, int j) { return f.at((i + nx) % nx, (j + ny) % ny); };
    double gmax = -std::numeric_limits<double>::infinity();
    for (double v : f.values()) gmax = std::max(gmax, v);
    const double threshold = rel_threshold * gmax;

    std::vector<Peak> peaks;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double v = f.at(i, j);
            if (!(v > threshold)) continue;
            bool is_max = true;
            for (int dj = -1; dj <= 1 && is_max; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if ((di != 0 || dj != 0) && !(v > at(i + di, j + dj))) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) continue;
            // Least-squares quadratic on the 3x3 stencil (cell units).
            double sum = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0, col_side = 0.0, col_mid = 0.0, row_side = 0.0,
                   row_mid = 0.0;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    const double w = at(i + di, j + dj);
                    sum += w;
                    sx += di * w;
                    sy += dj * w;
                    sxy += di * dj * w;
                    (di == 0 ? col_mid : col_side) += w;
                    (dj == 0 ? row_mid : row_side) += w;
                }
            }
            const double cb = sx / 6.0;
            const double cc = sy / 6.0;
            const double ce = sxy / 4.0;
            const double cd = col_side / 6.0 - col_mid / 3.0;
            const double cf = row_side / 6.0 - row_mid / 3.0;
            const double ca = sum / 9.0 - (2.0 / 3.0) * (cd + cf);
            const double det = 4.0 * cd * cf - ce * ce;
            double ox = 0.0, oy = 0.0, height = v;
            if (cd < 0.0 && det > 0.0) {
                ox = (-2.0 * cf * cb + ce * cc) / det;
                oy = (-2.0 * cd * cc + ce * cb) / det;
                if (std::abs(ox) <= 1.0 && std::abs(oy) <= 1.0) {
                    height = ca + cb * ox + cc * oy + cd * ox * ox + ce * ox * oy + cf * oy * oy;
                } else {
                    ox = oy = 0.0;
                }
            }
            peaks.push_back({g.x(i) + ox * g.dx(), g.y(j) + oy * g.dy(), height, i, j});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return peaks;
}

FitResult fit_lump(const Field& f, const Peak& seed, int window, double epsilon) {
    f.require(spectral::Repr::Physical);
    if (window < 8) throw ParameterError("fit_lump: window must be at least 8 cells");
    if (!(epsilon > 0.0)) throw ParameterError("fit_lump: epsilon must be positive");
    const auto& g = f.grid();
    const int side = 2 * window + 1;
    const int npts = side * side;
    std::vector<double> xs(npts), ys(npts), data(npts);
    int k = 0;
    for (int dj = -window; dj <= window; ++dj) {
        for (int di = -window; di <= window; ++di, ++k) {
            const int i = ((seed.i + di) % g.nx() + g.nx()) % g.nx();
            const int j = ((seed.j + dj) % g.ny() + g.ny()) % g.ny();
            xs[k] = g.x(seed.i) + di * g.dx();
            ys[k] = g.y(seed.j) + dj * g.dy();
            data[k] = f.at(i, j);
        }
    }
    const double e2 = epsilon * epsilon;
    auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
        const double a = p[0], b = p[1], x0 = p[2], y0 = p[3];
        const double c = 1.0 / (b * b);
        r.resize(npts);
        J.resize(npts, 4);
        for (int n = 0; n < npts; ++n) {
            const double xi = xs[n] - x0;
            const double eta = ys[n] - y0;
            const double s = xi + a * eta;
            const double P = s * s / e2;
            const double Q = 3.0 * b * b * eta * eta / e2;
            const double D = P + Q + c;
            const double D3 = D * D * D;
            const double uP = 24.0 * (P - 3.0 * Q - 3.0 * c) / D3;
            const double uQ = 24.0 * (3.0 * P - Q - c) / D3;
            r[n] = 24.0 * (-P + Q + c) / (D * D) - data[n];
            J(n, 0) = uP * 2.0 * s * eta / e2;
            J(n, 1) = uQ * (6.0 * b * eta * eta / e2 - 2.0 / (b * b * b));
            J(n, 2) = uP * (-2.0 * s / e2);
            J(n, 3) = uP * (-2.0 * a * s / e2) + uQ * (-6.0 * b * b * eta / e2);
        }
    };
    Eigen::VectorXd p0(4);
    p0 << 0.0, std::sqrt(std::max(seed.height, 1e-12) / 24.0), seed.x, seed.y;
    FitResult res = levenberg_marquardt(fn, p0);
    res.params[1] = std::abs(res.params[1]);
    return res;
}

Field subtract_fitted_lump(const Field& f, const FitResult& fit, double epsilon) {
    if (fit.params.size() != 4) throw ParameterError("subtract_fitted_lump: expected (a, b, x0, y0)");
    Field out = spectral::to_physical(f);
    const auto& g = out.grid();
    const double a = fit.params[0], b = fit.params[1], x0 = fit.params[2], y0 = fit.params[3];
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) out.at(i, j) -= lump_value(a, b, epsilon, g.x(i) - x0, g.y(j) - y0);
    }
    return out;
}

Spacing lattice_spacing(std::span<const Peak> peaks) {
    if (peaks.size() < 2) throw ParameterError("lattice_spacing: need at least two peaks");
    double total = 0.0;
    for (std::size_t a = 0; a < peaks.size(); ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < peaks.size(); ++b) {
            if (a != b) best = std::min(best, std::hypot(peaks[a].x - peaks[b].x, peaks[a].y - peaks[b].y));
        }
        total += best;
    }
    return {total / static_cast<double>(peaks.size()), static_cast<int>(peaks.size())};
}

FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw StructuralError("fit_power_law: xs and ys differ in length");
    const std::size_t n = xs.size();
    for (double x : xs) {
        if (!(x > 0.0)) throw ParameterError("fit_power_law: xs must be positive");
    }
    FitResult flagged;
    flagged.params.assign(3, std::numeric_limits<double>::quiet_NaN());
    flagged.stderr_proxy.assign(3, std::numeric_limits<double>::quiet_NaN());
    if (n < 4) return flagged;

    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    // Exponent guess from the log-log slope of finite differences: dy/dx ~ beta c2 x^(beta-1).
    std::vector<double> lx, ld;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double x0 = xs[order[k]], x1 = xs[order[k + 1]];
        const double d = (ys[order[k + 1]] - ys[order[k]]) / (x1 - x0);
        if (x1 > x0 && d != 0.0) {
            lx.push_back(std::log(0.5 * (x0 + x1)));
            ld.push_back(std::log(std::abs(d)));
        }
    }
    if (lx.size() < 2) return flagged;
    double beta0 = 1.0;
    {
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ld.begin(), ld.end(), 0.0) / ld.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            sxy += (lx[k] - mx) * (ld[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        if (sxx > 0.0) beta0 = sxy / sxx + 1.0;
        if (!std::isfinite(beta0) || std::abs(beta0) < 1e-3) beta0 = 1.0;
    }
    // Linear least squares for (c1, c2) at the guessed exponent.
    Eigen::MatrixXd M(n, 2);
    Eigen::VectorXd yv(n);
    for (std::size_t k = 0; k < n; ++k) {
        M(k, 0) = 1.0;
        M(k, 1) = std::pow(xs[k], beta0);
        yv[k] = ys[k];
    }
    const Eigen::Vector2d lin = M.colPivHouseholderQr().solve(yv);

    auto fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
        r.resize(n);
        J.resize(n, 3);
        for (std::size_t k = 0; k < n; ++k) {
            const double xb = std::pow(xs[k], p[2]);
            r[k] = p[0] + p[1] * xb - ys[k];
            J(k, 0) = 1.0;
            J(k, 1) = xb;
            J(k, 2) = p[1] * xb * std::log(xs[k]);
        }
    };
    Eigen::VectorXd p0(3);
    p0 << lin[0], lin[1], beta0;
    FitResult res = levenberg_marquardt(fn, p0, 200, 1e-12);

    // An exponent is only identifiable when the data actually vary.
    double ymin = ys[0], ymax = ys[0];
    for (double y : ys) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const double yscale = std::max(std::abs(ymin), std::abs(ymax));
    if (ymax - ymin <= 1e-12 * std::max(yscale, 1e-300) || std::abs(res.params[1]) <= 1e-12 * std::max(yscale, 1e-300)) {
        res.converged = false;
    }
    return res;
}

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw StructuralError("fit_linear: xs and ys differ in length");
    if (xs.size() < 2) throw ParameterError("fit_linear: need at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx == 0.0) throw ParameterError("fit_linear: all abscissae are equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

FitResult lump_position_scaling(std::span<const LumpRun> runs) {
    std::vector<double> eps, z;
    for (const LumpRun& r : runs) {
        eps.push_back(r.epsilon);
        z.push_back(r.x_max - r.u_max * r.t_max / 8.0);
    }
    return fit_power_law(eps, z);
}

}  // namespace dlab::diag
