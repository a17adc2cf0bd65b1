#include "dlab/fft.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <fftw3.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "dlab/errors.hpp"

namespace dlab::spectral {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int g_workers = 1;

void init_threads_once() {
    static const bool ok = [] { return fftw_init_threads() != 0; }();
    if (!ok) throw Error("fftw_init_threads failed");
}

}  // namespace

void set_worker_count(int n) {
    std::lock_guard lock(planner_mutex());
    g_workers = std::max(1, n);
#ifdef _OPENMP
    omp_set_num_threads(g_workers);
#endif
}

int worker_count() noexcept { return g_workers; }

Fft2D::Fft2D(int nx, int ny) : nx_(nx), ny_(ny) {
    // Caller holds the planner mutex.
    init_threads_once();
    fftw_plan_with_nthreads(g_workers);
    RealVector r(static_cast<std::size_t>(nx) * ny);
    ComplexVector c(static_cast<std::size_t>(nx / 2 + 1) * ny);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    forward_ = fftw_plan_dft_r2c_2d(ny, nx, r.data(), cp, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_2d(ny, nx, cp, r.data(), FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) throw Error("FFTW planning failed");
}

Fft2D::~Fft2D() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
}

const Fft2D& Fft2D::get(int nx, int ny) {
    static std::map<std::tuple<int, int, int>, std::unique_ptr<Fft2D>> cache;
    std::lock_guard lock(planner_mutex());
    auto key = std::make_tuple(nx, ny, g_workers);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::unique_ptr<Fft2D>(new Fft2D(nx, ny))).first;
    }
    return *it->second;
}

void Fft2D::forward(const double* in, std::complex<double>* out) const {
    // r2c does not modify its input.
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Fft2D::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(in), out);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nx_) * ny_;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[k] *= scale;
}

Fft1D::Fft1D(int n) : n_(n) {
    init_threads_once();
    fftw_plan_with_nthreads(g_workers);
    ComplexVector a(static_cast<std::size_t>(n));
    ComplexVector b(static_cast<std::size_t>(n));
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    forward_ = fftw_plan_dft_1d(n, ap, bp, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_1d(n, ap, bp, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) throw Error("FFTW planning failed");
}

Fft1D::~Fft1D() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
}

const Fft1D& Fft1D::get(int n) {
    static std::map<std::pair<int, int>, std::unique_ptr<Fft1D>> cache;
    std::lock_guard lock(planner_mutex());
    auto key = std::make_pair(n, g_workers);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::unique_ptr<Fft1D>(new Fft1D(n))).first;
    return *it->second;
}

void Fft1D::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(forward_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft1D::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(inverse_, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / n_;
    for (int k = 0; k < n_; ++k) out[k] *= scale;
}

}  // namespace dlab::spectral
