#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inls/evolution.hpp"
#include "inls/groundstate.hpp"
#include "inls/interaction.hpp"

namespace inls::cli {

// Config-level problems map to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key/value file with [section] headers. Values are whitespace-separated
// tokens; '|' is treated as whitespace so potential terms read naturally as
//   term = coeff_re coeff_im | zpow... | cpow...
// Repeated keys accumulate (used for term lines). Command-line flags override
// config keys via set().
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);  // tokenizes

    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key, int dflt) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
    std::vector<double> get_doubles(const std::string& key) const;  // empty if absent
    const std::vector<std::vector<std::string>>& occurrences(const std::string& key) const;

private:
    std::map<std::string, std::vector<std::vector<std::string>>> entries_;
    static std::vector<std::string> tokenize(const std::string& s);
};

struct InitialData {
    std::string kind = "gaussian";  // gaussian | groundstate_scaled | snapshot
    std::vector<double> amplitude;  // per component
    std::vector<double> width;
    double c = 1.0;
    std::string path;
};

struct RunConfig {
    SystemSpec spec;
    // grid
    std::string grid_kind = "radial";
    int grid_points = 4096;
    double r_max = 40.0;
    int points_per_axis = 256;
    double extent = 16.0;
    // ground state
    double omega = 1.0;
    GroundStateOptions gopts;
    // evolution
    EvolveOptions eopts;
    double q_drift_tol = 1e-6;
    double e_drift_tol = 1e-2;
    std::optional<double> virial_radius;
    // initial data / dichotomy
    InitialData initial;
    std::vector<double> c_list;
    bool radial_data = true;
    // run
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int samples = 1000;
    int threads = 1;
    std::string snapshot_path;  // report command input
};

SystemSpec build_system(const ConfigFile& cfg);
RunConfig build_run_config(const ConfigFile& cfg);

}  // namespace inls::cli
