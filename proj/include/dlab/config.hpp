#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlab/kp_solver.hpp"
#include "dlab/nls_solver.hpp"

namespace dlab::cli {

namespace fs = std::filesystem;

/// Flat `key = value` file. `#` starts a comment; keys are case-sensitive and
/// may appear once.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const fs::path& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const { return entries_.contains(key); }
    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    int line_of(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    /// Throws ConfigError naming every missing key, then the first unknown key.
    void check_keys(const std::set<std::string>& required, const std::set<std::string>& optional) const;

private:
    std::map<std::string, std::string> entries_;
    std::map<std::string, int> lines_;
};

enum class InitKind { Zero, Dsw, Lump, Cnoidal, Soliton, File };

struct KpJob {
    kp::SolverConfig solver;
    InitKind init = InitKind::Dsw;
    double c0 = 6.0;
    double lump_a = 0.0;
    double lump_b = 1.0;
    double beta1 = 1.0, beta2 = 0.5, beta3 = 0.0, q = 0.0;
    double soliton_k = 1.0, soliton_l = 0.0;
    std::string init_file;
};

struct NlsJob {
    nls::NlsConfig cfg;
};

/// Each axis is a single value or `start:stop:count` (inclusive endpoints).
struct ScanJob {
    std::vector<double> beta1, beta2, beta3, q, xi;
    analytic::Branch branch = analytic::Branch::KPI;
};

enum class FitModel { PowerLaw, Linear, LumpPosition };

struct FitJob {
    FitModel model = FitModel::PowerLaw;
    std::string input;
    std::string x_column;
    std::string y_column;
};

struct SliceJob {
    std::string snapshot;
    double y = 0.0;
};

struct PeaksJob {
    std::string snapshot;
    double rel_threshold = 0.3;
    bool fit = false;
    int window = 16;
};

KpJob parse_kp_job(const KeyValueConfig& c);
NlsJob parse_nls_job(const KeyValueConfig& c);
ScanJob parse_scan_job(const KeyValueConfig& c);
FitJob parse_fit_job(const KeyValueConfig& c);
SliceJob parse_slice_job(const KeyValueConfig& c);
PeaksJob parse_peaks_job(const KeyValueConfig& c);

/// Parses `start:stop:count` or a single number.
std::vector<double> parse_axis(const std::string& text, int line);

}  // namespace dlab::cli
