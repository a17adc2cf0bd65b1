#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dlab/errors.hpp"
#include "dlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dlab: dispersive-wave laboratory"};
    app.set_version_flag("--version", std::string(dlab::cli::kVersion));
    app.require_subcommand(1);

    std::string config, out, resume;
    std::optional<int> threads;
    std::optional<int> stop_after;

    const char* subs[][2] = {
        {"kp-evolve", "evolve the KP equation on a periodic grid"},
        {"nls-evolve", "evolve the 1D semiclassical NLS equation"},
        {"whitham-scan", "scan Whitham characteristic speeds over a parameter box"},
        {"fit", "fit a power law, a line or lump-position scaling to a table"},
        {"slice", "extract a y = const slice from a snapshot"},
        {"peaks", "locate peaks in a snapshot, optionally fitting a lump"},
    };
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s[0], s[1]);
        sc->add_option("--config", config, "key = value configuration file")->required()->check(CLI::ExistingFile);
        sc->add_option("--out", out, "output directory")->required();
        sc->add_option("--threads", threads, "worker count (default $DLAB_THREADS, else 1)");
        if (std::string(s[0]) == "kp-evolve") {
            sc->add_option("--resume", resume, "manifest.json of an earlier run")->check(CLI::ExistingFile);
            sc->add_option("--stop-after-snapshots", stop_after)->group("");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    dlab::cli::RunOptions opts;
    opts.config = config;
    opts.out_dir = out;
    if (!resume.empty()) opts.resume = resume;
    opts.stop_after_snapshots = stop_after;
    try {
        opts.threads = dlab::cli::resolve_threads(threads);
    } catch (const dlab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return dlab::cli::run_and_report(sub, opts, std::cerr);
    } catch (const dlab::cli::Interrupted& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
