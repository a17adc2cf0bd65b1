#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dlab/errors.hpp"
#include "dlab/field_io.hpp"
#include "dlab/runner.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dlab;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dlab_prop_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

cli::RunOptions options(const fs::path& cfg, const fs::path& out, int threads = 1) {
    cli::RunOptions o;
    o.config = cfg;
    o.out_dir = out;
    o.threads = threads;
    return o;
}

bool no_temp_files(const fs::path& dir) {
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().find(".tmp.") != std::string::npos) return false;
    }
    return true;
}

const char* kp_cfg = R"(epsilon = 0.1
alpha = -1
C0 = 6
h = 1e-3
t_end = 0.04
nx = 64
ny = 64
snapshot_times = 0.01, 0.02, 0.03
monitor_stride = 2
tail_limit = 0
)";

}  // namespace

TEST_CASE("property: identical configs give identical artifacts") {
    const auto d = scratch("repro");
    std::ofstream(d / "kp.cfg") << kp_cfg;
    std::ofstream(d / "nls.cfg") << "epsilon = 0.2\ny_end = 0.05\nC0 = 2\nn = 512\nsteps = 100\n";
    for (const char* run : {"a", "b"}) {
        cli::run("kp-evolve", options(d / "kp.cfg", d / run / "kp", 2));
        cli::run("nls-evolve", options(d / "nls.cfg", d / run / "nls", 2));
    }
    for (const char* f : {"kp/final.kpf", "kp/monitors.csv", "kp/snapshot_000000020.kpf", "nls/amplitude.csv",
                          "nls/final.nls"}) {
        CAPTURE(f);
        CHECK(io::read_file(d / "a" / f) == io::read_file(d / "b" / f));
    }
}

TEST_CASE("property: manifests only reference complete snapshots") {
    const auto d = scratch("atomic");
    std::ofstream(d / "kp.cfg") << kp_cfg;
    for (int stop = 1; stop <= 3; ++stop) {
        auto o = options(d / "kp.cfg", d / std::to_string(stop));
        o.stop_after_snapshots = stop;
        CHECK_THROWS_AS(cli::run("kp-evolve", o), cli::Interrupted);
        const json m = json::parse(io::read_file(o.out_dir / "manifest.json"));
        REQUIRE(m.at("snapshots").size() == static_cast<std::size_t>(stop));
        for (const auto& s : m.at("snapshots")) {
            const auto snap = io::read_kpfield(o.out_dir / s.at("file").get<std::string>());
            CHECK(snap.time == doctest::Approx(s.at("time").get<double>()));
            CHECK(snap.field.grid().nx() == 64);
        }
        CHECK(no_temp_files(o.out_dir));
    }
    const auto o = options(d / "kp.cfg", d / "full");
    cli::run("kp-evolve", o);
    CHECK(no_temp_files(o.out_dir));
    const json m = json::parse(io::read_file(o.out_dir / "manifest.json"));
    CHECK(m.at("snapshots").size() == 3);
    CHECK(m.at("status") == "complete");
}

TEST_CASE("property: worker count does not change the physics") {
    const auto d = scratch("workers");
    std::ofstream(d / "kp.cfg") << kp_cfg;
    cli::run("kp-evolve", options(d / "kp.cfg", d / "one", 1));
    cli::run("kp-evolve", options(d / "kp.cfg", d / "four", 4));
    const auto a = io::read_kpfield(d / "one" / "final.kpf");
    const auto b = io::read_kpfield(d / "four" / "final.kpf");
    double diff = 0, scale = 0;
    for (std::size_t k = 0; k < a.field.values().size(); ++k) {
        diff = std::max(diff, std::abs(a.field.values()[k] - b.field.values()[k]));
        scale = std::max(scale, std::abs(a.field.values()[k]));
    }
    CHECK(diff <= 1e-12 * scale);
}

TEST_CASE("error classes map to exit codes") {
    CHECK(cli::exit_code_for(ConfigError("x", 3)) == 2);
    CHECK(cli::exit_code_for(ParameterError("x")) == 2);
    CHECK(cli::exit_code_for(DomainError("x")) == 2);
    CHECK(cli::exit_code_for(StructuralError("x")) == 2);
    CHECK(cli::exit_code_for(BlowUpError("x", 0.5)) == 3);
    CHECK(cli::exit_code_for(NumericalError("x", 0.5)) == 3);
    CHECK(cli::exit_code_for(IoError("x")) == 4);
    CHECK(cli::exit_code_for(fs::filesystem_error("x", std::error_code())) == 4);
    CHECK(cli::exit_code_for(std::logic_error("x")) == 1);
}
