#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "dlab/field.hpp"

namespace dlab::io {

namespace fs = std::filesystem;

/// Write `contents` to `path` via a sibling temporary file and rename, so a
/// reader never observes a partial file.
void atomic_write(const fs::path& path, const std::string& contents);

std::string read_file(const fs::path& path);

struct KpSnapshot {
    spectral::Field field;
    double time = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
};

/// KPFIELD v1: ASCII header line `KPFIELD v1 Nx Ny Lx Ly time epsilon alpha`
/// followed by Nx*Ny little-endian doubles, y-major.
void write_kpfield(const fs::path& path, const spectral::Field& field, double time, double epsilon,
                   double alpha);
KpSnapshot read_kpfield(const fs::path& path);

struct NlsSnapshot {
    std::vector<std::complex<double>> psi;
    double half_period = 0.0;
    double y = 0.0;
    double epsilon = 0.0;
};

/// NLSFIELD v1: `NLSFIELD v1 N L y epsilon` then N interleaved (re, im) doubles.
void write_nlsfield(const fs::path& path, const NlsSnapshot& snap);
NlsSnapshot read_nlsfield(const fs::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace dlab::io
