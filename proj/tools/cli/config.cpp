#include "cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "inls/presets.hpp"

namespace inls::cli {

std::vector<std::string> ConfigFile::tokenize(const std::string& s) {
    std::string cleaned = s;
    for (auto& ch : cleaned)
        if (ch == '|' || ch == ',' || ch == '\t') ch = ' ';
    std::istringstream is(cleaned);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_text(os.str());
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
        std::string key = line.substr(0, eq);
        auto kl = key.find_last_not_of(" \t");
        key = key.substr(0, kl + 1);
        std::string full = section.empty() ? key : section + "." + key;
        cfg.entries_[full].push_back(tokenize(line.substr(eq + 1)));
    }
    return cfg;
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

void ConfigFile::set(const std::string& key, const std::string& value) {
    entries_[key] = {tokenize(value)};
}

const std::vector<std::vector<std::string>>& ConfigFile::occurrences(const std::string& key) const {
    static const std::vector<std::vector<std::string>> empty;
    auto it = entries_.find(key);
    return it == entries_.end() ? empty : it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& dflt) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.empty() || it->second.back().empty()) return dflt;
    return it->second.back().front();
}

static double to_double(const std::string& key, const std::string& tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ConfigError("bad number for " + key + ": " + tok);
    return v;
}

double ConfigFile::get_double(const std::string& key, double dflt) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return dflt;
    if (it->second.back().size() != 1) throw ConfigError(key + ": expected a single number");
    return to_double(key, it->second.back().front());
}

int ConfigFile::get_int(const std::string& key, int dflt) const {
    double v = get_double(key, static_cast<double>(dflt));
    return static_cast<int>(v);
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t dflt) const {
    double v = get_double(key, static_cast<double>(dflt));
    if (v < 0) throw ConfigError(key + ": must be non-negative");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
    std::vector<double> out;
    auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    for (const auto& tok : it->second.back()) out.push_back(to_double(key, tok));
    return out;
}

SystemSpec build_system(const ConfigFile& cfg) {
    int n = cfg.get_int("system.n", 3);
    double b = cfg.get_double("system.b", 0.5);
    std::string preset = cfg.get_string("system.preset", "");
    try {
        if (!preset.empty()) {
            std::map<std::string, double> params;
            for (const char* p : {"kappa", "gtilde", "beta_t", "beta_t1"})
                if (cfg.has(std::string("system.") + p))
                    params[p] = cfg.get_double(std::string("system.") + p, 0.0);
            return make_preset(preset, n, b, params);
        }
        SystemSpec s;
        s.name = cfg.get_string("system.name", "custom");
        s.dim = n;
        s.b = b;
        s.alpha = cfg.get_doubles("system.alpha");
        s.gamma = cfg.get_doubles("system.gamma");
        s.beta = cfg.get_doubles("system.beta");
        s.sigma = cfg.get_doubles("system.sigma");
        const int l = static_cast<int>(s.alpha.size());
        s.potential.components = l;
        for (const auto& toks : cfg.occurrences("system.term")) {
            if (static_cast<int>(toks.size()) != 2 + 2 * l)
                throw ConfigError("system.term: expected coeff_re coeff_im | zpow[l] | cpow[l]");
            Monomial m;
            m.coeff = Complex{to_double("term", toks[0]), to_double("term", toks[1])};
            for (int j = 0; j < l; ++j) m.zpow.push_back(static_cast<int>(to_double("term", toks[2 + j])));
            for (int j = 0; j < l; ++j)
                m.cpow.push_back(static_cast<int>(to_double("term", toks[2 + l + j])));
            s.potential.terms.push_back(std::move(m));
        }
        if (cfg.get_string("system.h8", "") == "singletons")
            for (const auto& t : s.potential.terms) s.supermodular_parts.push_back(MonomialList{t});
        s.finalize();
        return s;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
}

RunConfig build_run_config(const ConfigFile& cfg) {
    RunConfig rc;
    rc.spec = build_system(cfg);

    rc.grid_kind = cfg.get_string("grid.kind", "radial");
    rc.grid_points = cfg.get_int("grid.points", 4096);
    rc.r_max = cfg.get_double("grid.r_max", 40.0);
    rc.points_per_axis = cfg.get_int("grid.points_per_axis", 256);
    rc.extent = cfg.get_double("grid.extent", 16.0);

    // numeric defaults come from the option structs themselves
    rc.omega = cfg.get_double("groundstate.omega", 1.0);
    rc.gopts.max_iterations = cfg.get_int("groundstate.max_iterations", rc.gopts.max_iterations);
    rc.gopts.tol = cfg.get_double("groundstate.tol", rc.gopts.tol);
    rc.gopts.stabilizer_tol = cfg.get_double("groundstate.stabilizer_tol", rc.gopts.stabilizer_tol);
    rc.gopts.damping = cfg.get_double("groundstate.damping", rc.gopts.damping);
    rc.gopts.init_amplitude = cfg.get_doubles("groundstate.init_amplitude");
    rc.gopts.init_width = cfg.get_doubles("groundstate.init_width");

    rc.eopts.dt = cfg.get_double("evolve.dt", rc.eopts.dt);
    rc.eopts.T = cfg.get_double("evolve.T", rc.eopts.T);
    rc.eopts.monitor_stride = cfg.get_int("evolve.monitor_stride", rc.eopts.monitor_stride);
    rc.eopts.nonlinear_substeps = cfg.get_int("evolve.substeps", rc.eopts.nonlinear_substeps);
    rc.eopts.kmax_multiplier = cfg.get_double("evolve.kmax_multiplier", rc.eopts.kmax_multiplier);
    rc.eopts.tail_fraction = cfg.get_double("evolve.tail_fraction", rc.eopts.tail_fraction);
    rc.eopts.snapshot_stride = cfg.get_int("evolve.snapshot_stride", rc.eopts.snapshot_stride);
    if (cfg.has("evolve.virial_R")) rc.virial_radius = cfg.get_double("evolve.virial_R", 0.0);
    rc.q_drift_tol = cfg.get_double("evolve.q_drift_tol", 1e-6);
    rc.e_drift_tol = cfg.get_double("evolve.e_drift_tol", 1e-2);

    rc.initial.kind = cfg.get_string("initial.kind", "gaussian");
    rc.initial.amplitude = cfg.get_doubles("initial.amplitude");
    rc.initial.width = cfg.get_doubles("initial.width");
    rc.initial.c = cfg.get_double("initial.c", 1.0);
    rc.initial.path = cfg.get_string("initial.path", "");

    rc.c_list = cfg.get_doubles("dichotomy.c_list");
    rc.radial_data = cfg.get_int("dichotomy.radial", 1) != 0;

    rc.out_dir = cfg.get_string("run.out", "out");
    rc.seed = cfg.get_u64("run.seed", 1);
    rc.samples = cfg.get_int("run.samples", 1000);
    rc.threads = cfg.get_int("run.threads", 1);
    rc.snapshot_path = cfg.get_string("report.snapshot", "");
    return rc;
}

}  // namespace inls::cli
