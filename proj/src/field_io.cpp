#include "dlab/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dlab/errors.hpp"

namespace dlab::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void append_le(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.append(buf, 8);
}

double read_le(const char* p) {
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

// Splits "header\n<binary>" and returns the header tokens.
std::vector<std::string> header_tokens(const std::string& data, std::size_t& payload_offset,
                                       const fs::path& path) {
    const auto nl = data.find('\n');
    if (nl == std::string::npos) throw IoError("missing header line in " + path.string());
    payload_offset = nl + 1;
    std::istringstream is(data.substr(0, nl));
    std::vector<std::string> tokens;
    for (std::string t; is >> t;) tokens.push_back(t);
    return tokens;
}

double parse_double(const std::string& s, const fs::path& path) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("malformed number '" + s + "' in header of " + path.string());
    }
    return v;
}

int parse_int(const std::string& s, const fs::path& path) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("malformed integer '" + s + "' in header of " + path.string());
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void atomic_write(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        os.flush();
        if (!os) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_kpfield(const fs::path& path, const spectral::Field& field, double time, double epsilon,
                   double alpha) {
    const spectral::Field u = spectral::to_physical(field);
    const auto& g = u.grid();
    std::string out = "KPFIELD v1 " + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + " " +
                      format_double(g.lx()) + " " + format_double(g.ly()) + " " + format_double(time) +
                      " " + format_double(epsilon) + " " + format_double(alpha) + "\n";
    out.reserve(out.size() + 8 * g.physical_size());
    for (double v : u.values()) append_le(out, v);
    atomic_write(path, out);
}

KpSnapshot read_kpfield(const fs::path& path) {
    const std::string data = read_file(path);
    std::size_t off = 0;
    const auto tok = header_tokens(data, off, path);
    if (tok.size() != 9 || tok[0] != "KPFIELD" || tok[1] != "v1") {
        throw IoError("not a KPFIELD v1 file: " + path.string());
    }
    const int nx = parse_int(tok[2], path);
    const int ny = parse_int(tok[3], path);
    spectral::Grid2D grid(nx, ny, parse_double(tok[4], path), parse_double(tok[5], path));
    if (data.size() - off != 8 * grid.physical_size()) {
        throw IoError("truncated payload in " + path.string());
    }
    KpSnapshot snap{spectral::Field::physical(grid), parse_double(tok[6], path), parse_double(tok[7], path),
                    parse_double(tok[8], path)};
    auto v = snap.field.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = read_le(data.data() + off + 8 * k);
    return snap;
}

void write_nlsfield(const fs::path& path, const NlsSnapshot& snap) {
    std::string out = "NLSFIELD v1 " + std::to_string(snap.psi.size()) + " " + format_double(snap.half_period) +
                      " " + format_double(snap.y) + " " + format_double(snap.epsilon) + "\n";
    for (const auto& z : snap.psi) {
        append_le(out, z.real());
        append_le(out, z.imag());
    }
    atomic_write(path, out);
}

NlsSnapshot read_nlsfield(const fs::path& path) {
    const std::string data = read_file(path);
    std::size_t off = 0;
    const auto tok = header_tokens(data, off, path);
    if (tok.size() != 6 || tok[0] != "NLSFIELD" || tok[1] != "v1") {
        throw IoError("not a NLSFIELD v1 file: " + path.string());
    }
    const int n = parse_int(tok[2], path);
    if (n <= 0 || data.size() - off != 16 * static_cast<std::size_t>(n)) {
        throw IoError("truncated payload in " + path.string());
    }
    NlsSnapshot snap;
    snap.half_period = parse_double(tok[3], path);
    snap.y = parse_double(tok[4], path);
    snap.epsilon = parse_double(tok[5], path);
    snap.psi.resize(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < snap.psi.size(); ++k) {
        const char* p = data.data() + off + 16 * k;
        snap.psi[k] = {read_le(p), read_le(p + 8)};
    }
    return snap;
}

}  // namespace dlab::io
