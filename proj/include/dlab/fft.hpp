#pragma once

#include <complex>
#include <fftw3.h>

#include "dlab/aligned.hpp"

namespace dlab::spectral {

/// Number of workers used by transforms planned after this call.
/// Also caps the OpenMP team used for pointwise loops.
void set_worker_count(int n);
int worker_count() noexcept;

/// Real-to-complex 2D transform pair for an Ny x Nx array (x fastest).
///
/// Forward is unnormalized; inverse includes the 1/(Nx Ny) factor.
/// Instances are obtained from `Fft2D::get` and shared; executing plans is
/// thread-safe, creating them is serialized internally.
class Fft2D {
public:
    static const Fft2D& get(int nx, int ny);

    void forward(const double* in, std::complex<double>* out) const;
    /// `in` is used as scratch and destroyed.
    void inverse(std::complex<double>* in, double* out) const;

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;
    ~Fft2D();

private:
    Fft2D(int nx, int ny);

    int nx_;
    int ny_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

/// Complex 1D transform pair of length N. Same normalization as Fft2D.
class Fft1D {
public:
    static const Fft1D& get(int n);

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

    int size() const noexcept { return n_; }

    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;
    ~Fft1D();

private:
    explicit Fft1D(int n);

    int n_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

}  // namespace dlab::spectral
