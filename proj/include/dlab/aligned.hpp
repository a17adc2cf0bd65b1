#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

#include <fftw3.h>

namespace dlab {

// Allocator returning FFTW's SIMD-aligned storage so that plans created on one
// buffer can be executed on any other via the new-array interface.
template <class T>
struct FftwAllocator {
    using value_type = T;

    FftwAllocator() noexcept = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        void* p = fftw_malloc(n * sizeof(T));
        if (p == nullptr && n != 0) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RealVector = std::vector<double, FftwAllocator<double>>;
using ComplexVector = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

}  // namespace dlab
