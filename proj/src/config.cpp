#include "dlab/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "dlab/errors.hpp"
#include "dlab/field_io.hpp"
#include "dlab/grid.hpp"

namespace dlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& key, int line) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("'" + key + "' expects a number, got '" + s + "'", line);
    }
    return v;
}

long long to_int(const std::string& s, const std::string& key, int line) {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + s + "'", line);
    }
    return v;
}

analytic::Branch branch_of(const KeyValueConfig& c) {
    const std::string a = c.get_string("alpha", "-1");
    if (a == "-1" || a == "KPI") return analytic::Branch::KPI;
    if (a == "1" || a == "+1" || a == "KPII") return analytic::Branch::KPII;
    throw ConfigError("'alpha' must be -1 (KPI) or 1 (KPII), got '" + a + "'", c.line_of("alpha"));
}

int power_of_two(const KeyValueConfig& c, const std::string& key, long long fallback = -1) {
    const long long n = fallback < 0 ? c.get_int(key) : c.get_int(key, fallback);
    if (n < 8 || !spectral::is_power_of_two(n) || n > (1LL << 20)) {
        throw ConfigError("'" + key + "' must be a power of two between 8 and 2^20, got " + std::to_string(n),
                          c.line_of(key));
    }
    return static_cast<int>(n);
}

double positive(const KeyValueConfig& c, const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive", c.line_of(key));
    return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    return parse_string(io::read_file(path));
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig c;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
        if (c.entries_.contains(key)) {
            throw ConfigError("duplicate key '" + key + "' (first on line " + std::to_string(c.lines_[key]) + ")",
                              line);
        }
        c.entries_[key] = value;
        c.lines_[key] = line;
    }
    return c;
}

int KeyValueConfig::line_of(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    return to_double(get_string(key), key, line_of(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const { return to_int(get_string(key), key, line_of(key)); }

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + v + "'", line_of(key));
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    std::istringstream is(get_string(key));
    for (std::string item; std::getline(is, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key, line_of(key)));
    }
    return out;
}

void KeyValueConfig::check_keys(const std::set<std::string>& required, const std::set<std::string>& optional) const {
    std::string missing;
    for (const auto& k : required) {
        if (!has(k)) missing += (missing.empty() ? "" : ", ") + k;
    }
    if (!missing.empty()) throw ConfigError("missing required keys: " + missing);
    for (const auto& [k, v] : entries_) {
        if (!required.contains(k) && !optional.contains(k)) {
            throw ConfigError("unknown key '" + k + "'", line_of(k));
        }
    }
}

std::vector<double> parse_axis(const std::string& text, int line) {
    const auto first = text.find(':');
    if (first == std::string::npos) return {to_double(trim(text), "axis", line)};
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos) throw ConfigError("range must be start:stop:count", line);
    const double a = to_double(trim(text.substr(0, first)), "axis", line);
    const double b = to_double(trim(text.substr(first + 1, second - first - 1)), "axis", line);
    const long long n = to_int(trim(text.substr(second + 1)), "axis", line);
    if (n < 1) throw ConfigError("range count must be positive", line);
    std::vector<double> out;
    for (long long k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / static_cast<double>(n - 1));
    return out;
}

KpJob parse_kp_job(const KeyValueConfig& c) {
    std::set<std::string> required{"epsilon", "h", "t_end", "nx", "ny"};
    const std::string init = c.get_string("init", "dsw");
    if (init == "dsw") required.insert("C0");
    c.check_keys(required, {"label", "alpha", "lx", "ly", "cutoff_factor", "snapshot_times", "monitor_stride",
                            "dealias", "integrator", "tail_limit", "l2_drift_limit", "energy_drift_limit", "init",
                            "C0", "lump_a", "lump_b", "beta1", "beta2", "beta3", "q", "soliton_k", "soliton_l",
                            "init_file"});
    KpJob job;
    auto& s = job.solver;
    s.epsilon = positive(c, "epsilon", c.get_double("epsilon"));
    s.branch = branch_of(c);
    s.h = positive(c, "h", c.get_double("h"));
    s.t_end = c.get_double("t_end");
    if (s.t_end < 0.0) throw ConfigError("'t_end' must be non-negative", c.line_of("t_end"));
    s.grid.nx = power_of_two(c, "nx");
    s.grid.ny = power_of_two(c, "ny");
    s.grid.lx = positive(c, "lx", c.get_double("lx", s.grid.lx));
    s.grid.ly = positive(c, "ly", c.get_double("ly", s.grid.ly));
    s.cutoff_factor = positive(c, "cutoff_factor", c.get_double("cutoff_factor", s.cutoff_factor));
    s.snapshot_times = c.get_list("snapshot_times");
    for (double t : s.snapshot_times) {
        if (t < 0.0 || t > s.t_end) {
            throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, t_end]", c.line_of("snapshot_times"));
        }
    }
    const long long stride = c.get_int("monitor_stride", 1);
    if (stride < 1) throw ConfigError("'monitor_stride' must be at least 1", c.line_of("monitor_stride"));
    s.monitor_stride = static_cast<int>(stride);
    s.dealias = c.get_bool("dealias", false);
    const std::string integ = c.get_string("integrator", "composite");
    if (integ == "composite") {
        s.integrator = kp::Integrator::Composite;
    } else if (integ == "integrating_factor") {
        s.integrator = kp::Integrator::IntegratingFactor;
    } else {
        throw ConfigError("'integrator' must be composite or integrating_factor", c.line_of("integrator"));
    }
    s.tail_limit = c.get_double("tail_limit", s.tail_limit);
    s.l2_drift_limit = c.get_double("l2_drift_limit", s.l2_drift_limit);
    s.energy_drift_limit = c.get_double("energy_drift_limit", s.energy_drift_limit);

    if (init == "zero") {
        job.init = InitKind::Zero;
    } else if (init == "dsw") {
        job.init = InitKind::Dsw;
        job.c0 = c.get_double("C0");
    } else if (init == "lump") {
        job.init = InitKind::Lump;
        job.lump_a = c.get_double("lump_a", 0.0);
        job.lump_b = c.get_double("lump_b", 1.0);
        if (job.lump_b == 0.0) throw ConfigError("'lump_b' must be nonzero", c.line_of("lump_b"));
    } else if (init == "cnoidal") {
        job.init = InitKind::Cnoidal;
        job.beta1 = c.get_double("beta1");
        job.beta2 = c.get_double("beta2");
        job.beta3 = c.get_double("beta3");
        job.q = c.get_double("q", 0.0);
        if (!(job.beta1 > job.beta2 && job.beta2 > job.beta3)) {
            throw ConfigError("cnoidal levels need beta1 > beta2 > beta3", c.line_of("beta1"));
        }
    } else if (init == "soliton") {
        job.init = InitKind::Soliton;
        job.soliton_k = c.get_double("soliton_k", 1.0);
        job.soliton_l = c.get_double("soliton_l", 0.0);
    } else if (init == "file") {
        job.init = InitKind::File;
        job.init_file = c.get_string("init_file");
    } else {
        throw ConfigError("'init' must be one of zero, dsw, lump, cnoidal, soliton, file", c.line_of("init"));
    }
    return job;
}

NlsJob parse_nls_job(const KeyValueConfig& c) {
    c.check_keys({"epsilon", "y_end", "C0"}, {"label", "n", "lx", "h", "steps", "nls_init", "record_stride",
                                              "linear_only"});
    NlsJob job;
    auto& n = job.cfg;
    n.epsilon = positive(c, "epsilon", c.get_double("epsilon"));
    n.y_end = positive(c, "y_end", c.get_double("y_end"));
    n.c0 = c.get_double("C0");
    n.n = power_of_two(c, "n", n.n);
    n.half_period = positive(c, "lx", c.get_double("lx", n.half_period));
    if (c.has("h") && c.has("steps")) throw ConfigError("give either 'h' or 'steps', not both", c.line_of("steps"));
    if (c.has("steps")) {
        const long long steps = c.get_int("steps");
        if (steps < 1) throw ConfigError("'steps' must be positive", c.line_of("steps"));
        n.h = n.y_end / static_cast<double>(steps);
    } else {
        n.h = positive(c, "h", c.get_double("h", n.y_end / 1e4));
    }
    const std::string init = c.get_string("nls_init", "sech2");
    if (init == "sech2") {
        n.init = nls::InitialShape::Sech2;
    } else if (init == "dsech2") {
        n.init = nls::InitialShape::DSech2;
    } else {
        throw ConfigError("'nls_init' must be sech2 or dsech2", c.line_of("nls_init"));
    }
    const long long stride = c.get_int("record_stride", 1);
    if (stride < 1) throw ConfigError("'record_stride' must be at least 1", c.line_of("record_stride"));
    n.record_stride = static_cast<int>(stride);
    n.linear_only = c.get_bool("linear_only", false);
    return job;
}

ScanJob parse_scan_job(const KeyValueConfig& c) {
    c.check_keys({"beta1", "beta2", "beta3", "q", "xi"}, {"label", "alpha"});
    ScanJob job;
    job.branch = branch_of(c);
    job.beta1 = parse_axis(c.get_string("beta1"), c.line_of("beta1"));
    job.beta2 = parse_axis(c.get_string("beta2"), c.line_of("beta2"));
    job.beta3 = parse_axis(c.get_string("beta3"), c.line_of("beta3"));
    job.q = parse_axis(c.get_string("q"), c.line_of("q"));
    job.xi = parse_axis(c.get_string("xi"), c.line_of("xi"));
    return job;
}

FitJob parse_fit_job(const KeyValueConfig& c) {
    c.check_keys({"input", "model"}, {"label", "x_column", "y_column"});
    FitJob job;
    job.input = c.get_string("input");
    const std::string model = c.get_string("model");
    if (model == "power_law") {
        job.model = FitModel::PowerLaw;
    } else if (model == "linear") {
        job.model = FitModel::Linear;
    } else if (model == "lump_position") {
        job.model = FitModel::LumpPosition;
    } else {
        throw ConfigError("'model' must be power_law, linear or lump_position", c.line_of("model"));
    }
    job.x_column = c.get_string("x_column", "");
    job.y_column = c.get_string("y_column", "");
    return job;
}

SliceJob parse_slice_job(const KeyValueConfig& c) {
    c.check_keys({"snapshot"}, {"label", "y"});
    return {c.get_string("snapshot"), c.get_double("y", 0.0)};
}

PeaksJob parse_peaks_job(const KeyValueConfig& c) {
    c.check_keys({"snapshot"}, {"label", "rel_threshold", "fit", "window"});
    PeaksJob job;
    job.snapshot = c.get_string("snapshot");
    job.rel_threshold = c.get_double("rel_threshold", job.rel_threshold);
    if (!(job.rel_threshold > 0.0 && job.rel_threshold < 1.0)) {
        throw ConfigError("'rel_threshold' must lie in (0, 1)", c.line_of("rel_threshold"));
    }
    job.fit = c.get_bool("fit", false);
    const long long w = c.get_int("window", job.window);
    if (w < 8) throw ConfigError("'window' must be at least 8", c.line_of("window"));
    job.window = static_cast<int>(w);
    return job;
}

}  // namespace dlab::cli
