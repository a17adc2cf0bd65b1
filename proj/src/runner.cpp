#include "dlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dlab/analytic_solutions.hpp"
#include "dlab/config.hpp"
#include "dlab/diagnostics.hpp"
#include "dlab/errors.hpp"
#include "dlab/fft.hpp"
#include "dlab/field_io.hpp"
#include "dlab/kp_solver.hpp"
#include "dlab/nls_solver.hpp"
#include "dlab/whitham.hpp"

namespace dlab::cli {

namespace {

using json = nlohmann::json;
using io::format_double;

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json config_echo(const KeyValueConfig& c) {
    json j = json::object();
    for (const auto& [k, v] : c.entries()) j[k] = v;
    return j;
}

json base_manifest(const std::string& sub, const RunOptions& opts, const KeyValueConfig& c) {
    return json{{"tool", "dlab"},
                {"version", kVersion},
                {"subcommand", sub},
                {"config_file", fs::absolute(opts.config).string()},
                {"config", config_echo(c)},
                {"threads", opts.threads},
                {"status", "running"},
                {"started", utc_now()}};
}

void write_manifest(const fs::path& dir, const json& m) { io::atomic_write(dir / "manifest.json", m.dump(2) + "\n"); }

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

std::string monitor_csv(const std::vector<kp::MonitorSample>& rows) {
    std::string out = "t,linf,l2,energy,tail\n";
    for (const auto& m : rows) {
        out += format_double(m.t) + "," + format_double(m.linf) + "," + format_double(m.l2) + "," +
               format_double(m.energy) + "," + format_double(m.tail) + "\n";
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) return columns[k];
        }
        throw ConfigError("column '" + name + "' not present in input table");
    }
};

Table read_table(const fs::path& path) {
    std::istringstream is(io::read_file(path));
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty table " + path.string());
    t.header = split_csv_line(line);
    t.columns.resize(t.header.size());
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != t.header.size()) {
            throw IoError(path.string() + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                          " cells, expected " + std::to_string(t.header.size()));
        }
        for (std::size_t k = 0; k < cells.size(); ++k) {
            char* end = nullptr;
            const double v = std::strtod(cells[k].c_str(), &end);
            if (end == cells[k].c_str() || *end != '\0') {
                throw IoError(path.string() + ": row " + std::to_string(row) + ": '" + cells[k] + "' is not a number");
            }
            t.columns[k].push_back(v);
        }
    }
    return t;
}

fs::path resolve_input(const std::string& name, const RunOptions& opts) {
    fs::path p(name);
    if (p.is_relative()) p = opts.config.parent_path() / p;
    if (!fs::exists(p)) throw IoError("input file not found: " + p.string());
    return p;
}

spectral::Field initial_field(const KpJob& job, const spectral::Grid2D& grid, const RunOptions& opts) {
    const auto& s = job.solver;
    switch (job.init) {
        case InitKind::Zero:
            return spectral::Field::physical(grid);
        case InitKind::Dsw:
            return spectral::Field::from_function(
                grid, [&](double x, double y) { return analytic::dsw_initial(job.c0, x, y); });
        case InitKind::Lump: {
            const analytic::LumpParams p{job.lump_a, job.lump_b, s.epsilon};
            return spectral::Field::from_function(grid, [&](double x, double y) { return analytic::lump(p, x, y, 0.0); });
        }
        case InitKind::Cnoidal: {
            const analytic::CnoidalParams p{job.beta1, job.beta2, job.beta3, job.q, 0.0, s.epsilon, s.branch};
            return spectral::Field::from_function(grid,
                                                  [&](double x, double y) { return analytic::cnoidal_wave(p, x, y, 0.0); });
        }
        case InitKind::Soliton: {
            const analytic::SolitonParams p{job.soliton_k, job.soliton_l, 0.0, s.epsilon, s.branch};
            return spectral::Field::from_function(grid,
                                                  [&](double x, double y) { return analytic::line_soliton(p, x, y, 0.0); });
        }
        case InitKind::File: {
            auto snap = io::read_kpfield(resolve_input(job.init_file, opts));
            if (!(snap.field.grid() == grid)) throw ConfigError("init_file grid differs from nx/ny/lx/ly");
            return std::move(snap.field);
        }
    }
    throw ConfigError("unsupported init");
}

std::string snapshot_name(std::int64_t step) {
    std::ostringstream os;
    os << "snapshot_" << std::setw(9) << std::setfill('0') << step << ".kpf";
    return os.str();
}

void run_kp(const RunOptions& opts, const KeyValueConfig& cfg) {
    const KpJob job = parse_kp_job(cfg);
    const auto& s = job.solver;
    const spectral::Grid2D grid = s.grid.make();
    ensure_dir(opts.out_dir);

    json manifest = base_manifest("kp-evolve", opts, cfg);
    manifest["monitor_csv"] = "monitors.csv";
    manifest["snapshots"] = json::array();

    std::vector<kp::MonitorSample> rows;
    std::int64_t start_step = 0;
    std::optional<spectral::Field> u0;

    if (opts.resume) {
        const fs::path mpath = *opts.resume;
        const json old = json::parse(io::read_file(mpath), nullptr, false);
        if (old.is_discarded()) throw IoError("manifest is not valid JSON: " + mpath.string());
        if (old.value("subcommand", "") != "kp-evolve") throw ConfigError("resume: manifest is not a kp-evolve run");
        const json& old_cfg = old.at("config");
        const json now_cfg = config_echo(cfg);
        for (const auto& [k, v] : now_cfg.items()) {
            if (!old_cfg.contains(k) || old_cfg.at(k) != v) {
                throw ConfigError("resume refused: config key '" + k + "' differs from the manifest", cfg.line_of(k));
            }
        }
        for (const auto& [k, v] : old_cfg.items()) {
            if (!now_cfg.contains(k)) throw ConfigError("resume refused: config key '" + k + "' was removed");
        }
        const json& snaps = old.at("snapshots");
        if (snaps.empty()) throw IoError("resume: manifest lists no snapshot");
        const json& last = snaps.back();
        const fs::path snap_path = mpath.parent_path() / last.at("file").get<std::string>();
        if (!fs::exists(snap_path)) throw IoError("resume: snapshot file missing: " + snap_path.string());
        auto snap = io::read_kpfield(snap_path);
        if (!(snap.field.grid() == grid)) throw ConfigError("resume: snapshot grid differs from config");
        start_step = last.at("step").get<std::int64_t>();
        u0.emplace(std::move(snap.field));
        for (const auto& e : snaps) {
            if (e.at("step").get<std::int64_t>() < start_step) manifest["snapshots"].push_back(e);
        }
        const fs::path old_csv = mpath.parent_path() / old.value("monitor_csv", "monitors.csv");
        if (fs::exists(old_csv)) {
            const Table t = read_table(old_csv);
            const double t_start = static_cast<double>(start_step) * s.h;
            for (std::size_t r = 0; r < t.columns.at(0).size(); ++r) {
                if (t.columns[0][r] < t_start - 0.5 * s.h) {
                    rows.push_back({t.columns[0][r], t.columns[1][r], t.columns[2][r], t.columns[3][r], t.columns[4][r]});
                }
            }
        }
        if (mpath.parent_path() != opts.out_dir) {
            for (const auto& e : manifest["snapshots"]) {
                const std::string f = e.at("file");
                fs::copy_file(mpath.parent_path() / f, opts.out_dir / f, fs::copy_options::overwrite_existing);
            }
        }
        manifest["resumed_from"] = fs::absolute(mpath).string();
        manifest["resumed_at_step"] = start_step;
    } else {
        u0.emplace(initial_field(job, grid, opts));
    }
    write_manifest(opts.out_dir, manifest);

    int written = 0;
    kp::EvolveHooks hooks;
    hooks.on_monitor = [&](const kp::MonitorSample& m) { rows.push_back(m); };
    hooks.on_snapshot = [&](double t, std::int64_t step, const spectral::Field& u) {
        const std::string name = snapshot_name(step);
        io::write_kpfield(opts.out_dir / name, u, t, s.epsilon, analytic::sign(s.branch));
        auto& list = manifest["snapshots"];
        if (list.empty() || list.back().at("step").get<std::int64_t>() != step) {
            list.push_back({{"time", t}, {"step", step}, {"file", name}});
        }
        io::atomic_write(opts.out_dir / "monitors.csv", monitor_csv(rows));
        write_manifest(opts.out_dir, manifest);
        ++written;
        if (opts.stop_after_snapshots && written >= *opts.stop_after_snapshots) throw Interrupted();
    };

    try {
        const kp::RunRecord rec = kp::evolve(s, *u0, hooks, start_step);
        io::atomic_write(opts.out_dir / "monitors.csv", monitor_csv(rows));
        io::write_kpfield(opts.out_dir / "final.kpf", *rec.final_state, s.t_end, s.epsilon, analytic::sign(s.branch));
        manifest["final_snapshot"] = "final.kpf";
        manifest["peak_linf"] = rec.peak_linf;
        manifest["peak_time"] = rec.peak_time;
        manifest["peak_time_convention"] = "time of the running maximum of |u|_inf over all steps";
        manifest["steps_taken"] = rec.steps_taken;
        manifest["wall_seconds"] = rec.wall_seconds;
        manifest["status"] = "complete";
        manifest["finished"] = utc_now();
        write_manifest(opts.out_dir, manifest);
    } catch (const Interrupted&) {
        throw;
    } catch (const NumericalError& e) {
        io::atomic_write(opts.out_dir / "monitors.csv", monitor_csv(rows));
        manifest["status"] = "failed";
        manifest["error"] = {{"type", "numerical"}, {"message", e.what()}, {"last_good_time", e.last_good_time()}};
        manifest["finished"] = utc_now();
        write_manifest(opts.out_dir, manifest);
        throw;
    }
}

void run_nls(const RunOptions& opts, const KeyValueConfig& cfg) {
    const NlsJob job = parse_nls_job(cfg);
    ensure_dir(opts.out_dir);
    json manifest = base_manifest("nls-evolve", opts, cfg);
    const auto run = nls::nls_evolve(job.cfg, nls::initial_datum(job.cfg));
    std::string csv = "y,maxpsi\n";
    for (const auto& s : run.series) csv += format_double(s.y) + "," + format_double(s.max_abs) + "\n";
    io::atomic_write(opts.out_dir / "amplitude.csv", csv);
    io::write_nlsfield(opts.out_dir / "final.nls", {run.final_state, job.cfg.half_period, run.y_final, job.cfg.epsilon});
    manifest["outputs"] = {{"amplitude_csv", "amplitude.csv"}, {"final_state", "final.nls"}};
    manifest["peak_abs_psi"] = run.peak;
    manifest["peak_y"] = run.peak_y;
    manifest["mass_drift"] = run.mass_drift;
    manifest["status"] = "complete";
    manifest["finished"] = utc_now();
    write_manifest(opts.out_dir, manifest);
}

void run_scan(const RunOptions& opts, const KeyValueConfig& cfg) {
    const ScanJob job = parse_scan_job(cfg);
    ensure_dir(opts.out_dir);
    json manifest = base_manifest("whitham-scan", opts, cfg);
    std::string csv = "beta1,beta2,beta3,q,xi,re1,im1,re2,im2,re3,im3,re4,im4,class\n";
    std::size_t rows = 0, skipped = 0;
    for (double b1 : job.beta1) {
        for (double b2 : job.beta2) {
            for (double b3 : job.beta3) {
                if (!(b1 >= b2 && b2 >= b3 && b1 > b3)) {
                    skipped += job.q.size() * job.xi.size();
                    continue;
                }
                for (double q : job.q) {
                    const whitham::WhithamPoint p{b1, b2, b3, q, job.branch};
                    const auto mm = whitham::modulation_matrices(p);
                    for (double xi : job.xi) {
                        const auto spec = whitham::pencil_spectrum(mm.A, mm.B, xi);
                        csv += format_double(b1) + "," + format_double(b2) + "," + format_double(b3) + "," +
                               format_double(q) + "," + format_double(xi);
                        for (const auto& z : spec.eigenvalues) csv += "," + format_double(z.real()) + "," + format_double(z.imag());
                        csv += std::string(",") + whitham::to_string(spec.classification) + "\n";
                        ++rows;
                    }
                }
            }
        }
    }
    io::atomic_write(opts.out_dir / "scan.csv", csv);
    manifest["outputs"] = {{"scan_csv", "scan.csv"}};
    manifest["rows"] = rows;
    manifest["skipped_unordered"] = skipped;
    manifest["status"] = "complete";
    manifest["finished"] = utc_now();
    write_manifest(opts.out_dir, manifest);
}

std::string fit_row(const std::string& name, const std::string& param, double value, double err) {
    return name + "," + param + "," + format_double(value) + "," + (std::isfinite(err) ? format_double(err) : "nan") + "\n";
}

void run_fit(const RunOptions& opts, const KeyValueConfig& cfg) {
    const FitJob job = parse_fit_job(cfg);
    ensure_dir(opts.out_dir);
    json manifest = base_manifest("fit", opts, cfg);
    const Table t = read_table(resolve_input(job.input, opts));
    if (t.header.size() < 2) throw ConfigError("fit input needs at least two columns");
    const auto& xs = job.x_column.empty() ? t.columns[0] : t.column(job.x_column);
    const auto& ys = job.y_column.empty() ? t.columns[1] : t.column(job.y_column);
    std::string csv = "name,param,value,stderr-proxy\n";
    const double nan = std::nan("");
    if (job.model == FitModel::Linear) {
        const auto lf = diag::fit_linear(xs, ys);
        csv += fit_row("linear", "slope", lf.slope, nan);
        csv += fit_row("linear", "intercept", lf.intercept, nan);
        manifest["result"] = {{"slope", lf.slope}, {"intercept", lf.intercept}};
    } else {
        diag::FitResult r;
        std::string name;
        if (job.model == FitModel::PowerLaw) {
            r = diag::fit_power_law(xs, ys);
            name = "power_law";
        } else {
            std::vector<diag::LumpRun> runs;
            const auto& eps = t.column("epsilon");
            const auto& xm = t.column("x_max");
            const auto& tm = t.column("t_max");
            const auto& um = t.column("u_max");
            for (std::size_t k = 0; k < eps.size(); ++k) runs.push_back({eps[k], xm[k], tm[k], um[k]});
            r = diag::lump_position_scaling(runs);
            name = "lump_position";
        }
        const char* names[] = {"c1", "c2", "beta"};
        for (int k = 0; k < 3; ++k) csv += fit_row(name, names[k], r.params[k], r.stderr_proxy[k]);
        csv += fit_row(name, "residual_rms", r.residual_rms, nan);
        csv += fit_row(name, "converged", r.converged ? 1.0 : 0.0, nan);
        manifest["result"] = {{"params", r.params}, {"converged", r.converged}, {"iterations", r.iterations}};
    }
    io::atomic_write(opts.out_dir / "fits.csv", csv);
    manifest["outputs"] = {{"fits_csv", "fits.csv"}};
    manifest["status"] = "complete";
    manifest["finished"] = utc_now();
    write_manifest(opts.out_dir, manifest);
}

void run_slice(const RunOptions& opts, const KeyValueConfig& cfg) {
    const SliceJob job = parse_slice_job(cfg);
    ensure_dir(opts.out_dir);
    json manifest = base_manifest("slice", opts, cfg);
    const auto snap = io::read_kpfield(resolve_input(job.snapshot, opts));
    const auto& g = snap.field.grid();
    const int j = static_cast<int>(std::lround((job.y + g.ly()) / g.dy())) % g.ny();
    std::string csv = "x,u\n";
    for (int i = 0; i < g.nx(); ++i) csv += format_double(g.x(i)) + "," + format_double(snap.field.at(i, j)) + "\n";
    io::atomic_write(opts.out_dir / "slice.csv", csv);
    manifest["outputs"] = {{"slice_csv", "slice.csv"}};
    manifest["y_row"] = g.y(j);
    manifest["time"] = snap.time;
    manifest["status"] = "complete";
    manifest["finished"] = utc_now();
    write_manifest(opts.out_dir, manifest);
}

void run_peaks(const RunOptions& opts, const KeyValueConfig& cfg) {
    const PeaksJob job = parse_peaks_job(cfg);
    ensure_dir(opts.out_dir);
    json manifest = base_manifest("peaks", opts, cfg);
    const auto snap = io::read_kpfield(resolve_input(job.snapshot, opts));
    const auto peaks = diag::find_peaks(snap.field, job.rel_threshold);
    std::string csv = "x,y,height\n";
    for (const auto& p : peaks) csv += format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.height) + "\n";
    io::atomic_write(opts.out_dir / "peaks.csv", csv);
    json outputs = {{"peaks_csv", "peaks.csv"}};
    manifest["peak_count"] = peaks.size();
    if (peaks.size() >= 2) manifest["mean_nn_distance"] = diag::lattice_spacing(peaks).mean_nn_distance;
    if (job.fit && !peaks.empty()) {
        const auto fit = diag::fit_lump(snap.field, peaks.front(), job.window, snap.epsilon);
        std::string fcsv = "name,param,value,stderr-proxy\n";
        const char* names[] = {"a", "b", "x0", "y0"};
        for (int k = 0; k < 4; ++k) fcsv += fit_row("lump", names[k], fit.params[k], fit.stderr_proxy[k]);
        fcsv += fit_row("lump", "residual_rms", fit.residual_rms, std::nan(""));
        fcsv += fit_row("lump", "converged", fit.converged ? 1.0 : 0.0, std::nan(""));
        io::atomic_write(opts.out_dir / "fits.csv", fcsv);
        const auto residual = diag::subtract_fitted_lump(snap.field, fit, snap.epsilon);
        io::write_kpfield(opts.out_dir / "subtracted.kpf", residual, snap.time, snap.epsilon, snap.alpha);
        outputs["fits_csv"] = "fits.csv";
        outputs["subtracted"] = "subtracted.kpf";
        manifest["lump_fit_relative_rms"] = fit.residual_rms / peaks.front().height;
    }
    manifest["outputs"] = outputs;
    manifest["status"] = "complete";
    manifest["finished"] = utc_now();
    write_manifest(opts.out_dir, manifest);
}

}  // namespace

void run(const std::string& subcommand, const RunOptions& opts) {
    spectral::set_worker_count(opts.threads);
    const KeyValueConfig cfg = KeyValueConfig::parse_file(opts.config);
    if (subcommand == "kp-evolve") return run_kp(opts, cfg);
    if (subcommand == "nls-evolve") return run_nls(opts, cfg);
    if (subcommand == "whitham-scan") return run_scan(opts, cfg);
    if (subcommand == "fit") return run_fit(opts, cfg);
    if (subcommand == "slice") return run_slice(opts, cfg);
    if (subcommand == "peaks") return run_peaks(opts, cfg);
    throw ConfigError("unknown subcommand '" + subcommand + "'");
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
        dynamic_cast<const DomainError*>(&e) || dynamic_cast<const StructuralError*>(&e)) {
        return 2;
    }
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return 4;
    return 1;
}

int run_and_report(const std::string& subcommand, const RunOptions& opts, std::ostream& err) {
    try {
        run(subcommand, opts);
        return 0;
    } catch (const Interrupted&) {
        throw;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        json rec = {{"error", code == 2 ? "config" : code == 3 ? "numerical" : code == 4 ? "io" : "internal"},
                    {"message", e.what()},
                    {"exit_code", code},
                    {"subcommand", subcommand}};
        if (const auto* ce = dynamic_cast<const ConfigError*>(&e); ce && ce->line() > 0) rec["line"] = ce->line();
        if (const auto* ne = dynamic_cast<const NumericalError*>(&e)) rec["last_good_time"] = ne->last_good_time();
        err << rec.dump() << "\n";
        std::error_code ec;
        if (fs::is_directory(opts.out_dir, ec)) {
            try {
                io::atomic_write(opts.out_dir / "error.json", rec.dump(2) + "\n");
            } catch (const std::exception&) {
            }
        }
        return code;
    }
}

int resolve_threads(std::optional<int> flag) {
    if (flag) {
        if (*flag < 1) throw ConfigError("--threads must be at least 1");
        return *flag;
    }
    if (const char* env = std::getenv("DLAB_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw ConfigError("DLAB_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return 1;
}

}  // namespace dlab::cli
