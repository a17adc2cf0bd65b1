#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace dlab::cli {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    fs::path config;
    fs::path out_dir;
    int threads = 1;
    std::optional<fs::path> resume;
    /// Stop (as if killed) once this many snapshots were written; leaves the
    /// manifest in the "running" state. Used to exercise resume.
    std::optional<int> stop_after_snapshots;
};

/// Thrown when `stop_after_snapshots` triggers.
class Interrupted : public std::exception {
public:
    const char* what() const noexcept override { return "run interrupted after snapshot"; }
};

/// Runs `kp-evolve`, `nls-evolve`, `whitham-scan`, `fit`, `slice` or `peaks`.
/// Library errors propagate unchanged.
void run(const std::string& subcommand, const RunOptions& opts);

/// 0 ok, 2 configuration, 3 numerical failure, 4 I/O, 1 anything else.
int exit_code_for(const std::exception& e) noexcept;

/// run() plus error reporting: on failure a JSON error record is printed to
/// `err` and written to `<out>/error.json`; returns the exit code.
int run_and_report(const std::string& subcommand, const RunOptions& opts, std::ostream& err);

/// `--threads` if given, else $DLAB_THREADS, else 1.
int resolve_threads(std::optional<int> flag);

}  // namespace dlab::cli
