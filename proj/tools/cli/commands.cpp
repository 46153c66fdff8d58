#include "cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "inls/dichotomy.hpp"
#include "inls/snapshot.hpp"

namespace inls::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

std::shared_ptr<const RadialGrid> make_grid(const RunConfig& rc) {
    return std::make_shared<RadialGrid>(rc.spec.dim, rc.grid_points, rc.r_max);
}

Field gaussian_initial(const RunConfig& rc, std::shared_ptr<const RadialGrid> grid) {
    Field u = Field::zeros(grid, rc.spec.components());
    for (int k = 0; k < u.components(); ++k) {
        double amp = k < static_cast<int>(rc.initial.amplitude.size()) ? rc.initial.amplitude[k] : 1.0;
        double width = k < static_cast<int>(rc.initial.width.size()) ? rc.initial.width[k] : 1.0;
        for (int j = 0; j < grid->points; ++j) {
            double r = grid->r[j];
            u.comp[k][j] = Complex{amp * std::exp(-(r / width) * (r / width)), 0.0};
        }
    }
    return u;
}

// Reference system for thresholds: same (n, b, alpha, gamma, sigma, F) with
// beta = 0, solved at omega = 1 (the G(1, 0) ground states).
SystemSpec reference_system(const SystemSpec& spec) {
    SystemSpec ref = spec;
    ref.beta.assign(spec.components(), 0.0);
    ref.finalize();
    return ref;
}

struct DriftReport {
    double q_drift = 0;
    double e_drift = 0;
};

DriftReport conservation_drift(const EvolutionTrace& trace) {
    DriftReport d;
    if (trace.rows.empty()) return d;
    const auto& first = trace.rows.front();
    double qscale = std::max(std::abs(first.Q), 1e-300);
    double escale = std::max(std::abs(first.E), std::abs(first.K));
    escale = std::max(escale, 1e-300);
    for (const auto& r : trace.rows) {
        if (!std::isfinite(r.Q) || !std::isfinite(r.E)) break;
        d.q_drift = std::max(d.q_drift, std::abs(r.Q - first.Q) / qscale);
        d.e_drift = std::max(d.e_drift, std::abs(r.E - first.E) / escale);
    }
    return d;
}

std::string groundstate_record(const SystemSpec& spec, const GroundStateResult& gs,
                               const Certification& cert) {
    std::ostringstream os;
    os << "system = " << spec.name << "\n";
    os << "status = " << to_string(gs.status) << "\n";
    os << "omega = " << fmt(gs.omega) << "\n";
    for (std::size_t k = 0; k < gs.bk.size(); ++k)
        os << "b_" << (k + 1) << " = " << fmt(gs.bk[k]) << "\n";
    os << "iterations = " << gs.iterations << "\n";
    for (std::size_t k = 0; k < gs.pde_residual.size(); ++k)
        os << "pde_residual_" << (k + 1) << " = " << fmt(gs.pde_residual[k]) << "\n";
    os << "stabilizer_gap = " << fmt(gs.stabilizer_gap) << "\n";
    os << "pohozaev_P2I = " << fmt(gs.pohozaev[0]) << "\n";
    os << "pohozaev_K = " << fmt(gs.pohozaev[1]) << "\n";
    os << "pohozaev_Q = " << fmt(gs.pohozaev[2]) << "\n";
    os << gs.functionals.to_text();
    os << "certify_residual = " << cert.residual_ok << "\n";
    os << "certify_pohozaev = " << cert.pohozaev_ok << "\n";
    os << "certify_positivity = " << cert.positivity_ok << "\n";
    os << "certify_monotonicity = " << cert.monotonicity_ok << "\n";
    os << "certify_xi1_gap = " << cert.xi1_gap_ok << "\n";
    os << "certify_pass = " << cert.pass << "\n";
    if (cert.pass) {
        os << "xi1_closed = " << fmt(cert.thresholds.xi1_closed) << "\n";
        os << "xi1_direct = " << fmt(cert.thresholds.xi1_direct) << "\n";
        os << "xi1_gap_rel = " << fmt(cert.thresholds.xi1_gap_rel) << "\n";
        os << "C_op = " << fmt(cert.thresholds.C_op) << "\n";
    }
    return os.str();
}

struct ReferenceState {
    SystemSpec ref;
    GroundStateResult gs;
    Certification cert;
    ThresholdSet thresholds;
};

// Solve and certify the G(1, 0) reference ground state on the run grid.
ReferenceState solve_reference(const RunConfig& rc, std::shared_ptr<const RadialGrid> grid) {
    ReferenceState st{reference_system(rc.spec), {}, {}, {}};
    st.gs = solve(st.ref, 1.0, grid, rc.gopts);
    st.cert = certify(st.ref, st.gs, rc.gopts);
    if (st.cert.pass) st.thresholds = st.cert.thresholds;
    return st;
}

EvolveOptions evolve_options(const RunConfig& rc, std::shared_ptr<const RadialGrid> grid,
                             std::shared_ptr<CutoffFunction>* cutoff_out) {
    EvolveOptions opts = rc.eopts;
    double R = rc.virial_radius.value_or(grid->r_max / 4.0);
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(*grid, R));
    if (cutoff_out) *cutoff_out = cutoff;
    const SystemSpec& spec = rc.spec;
    opts.virial_sampler = [cutoff, &spec](const Field& u, double t) {
        auto s = virial_sample(spec, u, *cutoff);
        s.t = t;
        return s;
    };
    return opts;
}

}  // namespace

int cmd_check(const RunConfig& rc) {
    auto rep = check_hypotheses(rc.spec, rc.samples, rc.seed);
    fs::create_directories(rc.out_dir);
    write_text(rc.out_dir + "/hypotheses.txt", rep.to_text());
    std::cout << rep.to_text();
    return rep.all_pass() ? 0 : 1;
}

int cmd_ground_state(const RunConfig& rc) {
    auto grid = make_grid(rc);
    auto bk = rc.spec.zero_order_coefficients(rc.omega);
    for (std::size_t k = 0; k < bk.size(); ++k)
        if (!(bk[k] > 0)) {
            std::cerr << "ground-state: b_" << (k + 1) << " = " << bk[k]
                      << " <= 0; choose a larger omega\n";
            return 2;
        }
    auto gs = solve(rc.spec, rc.omega, grid, rc.gopts);
    fs::create_directories(rc.out_dir);
    if (!gs.converged()) {
        std::ostringstream os;
        os << "status = " << to_string(gs.status) << "\n";
        for (std::size_t i = 0; i < gs.residual_history.size(); ++i)
            os << i + 1 << " " << fmt(gs.residual_history[i]) << "\n";
        write_text(rc.out_dir + "/residual_history.txt", os.str());
        std::cerr << "ground-state: " << to_string(gs.status) << " after " << gs.iterations
                  << " iterations\n";
        return 1;
    }
    auto cert = certify(rc.spec, gs, rc.gopts);
    write_snapshot(rc.out_dir + "/groundstate.inls", gs.psi);
    write_text(rc.out_dir + "/groundstate.txt", groundstate_record(rc.spec, gs, cert));
    std::cout << groundstate_record(rc.spec, gs, cert);
    return cert.pass ? 0 : 1;
}

int cmd_evolve(const RunConfig& rc) {
    auto grid = make_grid(rc);
    Field u0;
    if (rc.initial.kind == "gaussian") {
        u0 = gaussian_initial(rc, grid);
    } else if (rc.initial.kind == "groundstate_scaled") {
        auto ref = solve_reference(rc, grid);
        if (!ref.gs.converged()) {
            std::cerr << "evolve: reference ground state failed: " << to_string(ref.gs.status) << "\n";
            return 1;
        }
        u0 = ref.gs.psi;
        for (auto& compv : u0.comp)
            for (auto& z : compv) z *= rc.initial.c;
    } else if (rc.initial.kind == "snapshot") {
        u0 = read_snapshot(rc.initial.path);
    } else {
        throw ConfigError("initial.kind must be gaussian|groundstate_scaled|snapshot");
    }
    std::shared_ptr<CutoffFunction> cutoff;
    auto opts = evolve_options(rc, grid, &cutoff);
    if (rc.eopts.snapshot_stride > 0) {
        opts.snapshot_dir = rc.out_dir + "/snapshots";
        fs::create_directories(opts.snapshot_dir);
    }
    auto trace = evolve(rc.spec, u0, opts);
    fs::create_directories(rc.out_dir);
    write_text(rc.out_dir + "/trace.csv", trace.to_csv());
    if (trace.flag.fired)
        std::cout << "flag = " << trace.flag.reason << " at t = " << fmt(trace.flag.time) << "\n";
    return 0;
}

int cmd_classify(const RunConfig& rc) {
    auto grid = make_grid(rc);
    auto ref = solve_reference(rc, grid);
    fs::create_directories(rc.out_dir);
    if (!ref.gs.converged()) {
        std::cerr << "classify: reference ground state failed: " << to_string(ref.gs.status) << "\n";
        return 1;
    }
    if (!ref.cert.pass) {
        std::cerr << "classify: reference ground state failed certification\n";
        return 1;
    }

    Field u0;
    if (rc.initial.kind == "snapshot") {
        u0 = read_snapshot(rc.initial.path);
        if (!u0.is_radial() || u0.radial->points != grid->points)
            return 2;
    } else if (rc.initial.kind == "gaussian") {
        u0 = gaussian_initial(rc, grid);
    } else {
        u0 = ref.gs.psi;
        for (auto& compv : u0.comp)
            for (auto& z : compv) z *= rc.initial.c;
    }

    auto cl = classify(rc.spec, u0, ref.thresholds, rc.radial_data);
    write_text(rc.out_dir + "/classification.txt", cl.to_text());
    std::cout << cl.to_text();

    std::shared_ptr<CutoffFunction> cutoff;
    auto opts = evolve_options(rc, grid, &cutoff);
    auto trace = evolve(rc.spec, u0, opts);
    write_text(rc.out_dir + "/trace.csv", trace.to_csv());

    auto drift = conservation_drift(trace);
    std::ostringstream diag;
    diag << "q_drift = " << fmt(drift.q_drift) << "\n";
    diag << "e_drift = " << fmt(drift.e_drift) << "\n";
    if (trace.flag.fired)
        diag << "flag = " << trace.flag.reason << " at t = " << fmt(trace.flag.time) << "\n";
    write_text(rc.out_dir + "/evolution_summary.txt", diag.str());
    std::cout << diag.str();

    bool global_verdict = cl.verdict == Verdict::GlobalSubcritical ||
                          cl.verdict == Verdict::GlobalMassCritical ||
                          cl.verdict == Verdict::GlobalIntercritical;
    if (trace.flag.fired && global_verdict) {
        std::cerr << "classify: contradiction, blow-up flag under a global verdict\n";
        return 1;
    }
    if (drift.q_drift > rc.q_drift_tol || drift.e_drift > rc.e_drift_tol) {
        std::cerr << "classify: conservation drift beyond tolerance (Q " << fmt(drift.q_drift)
                  << ", E " << fmt(drift.e_drift) << ")\n";
        return 1;
    }
    return 0;
}

int cmd_sweep(const RunConfig& rc) {
    fs::create_directories(rc.out_dir);
    if (rc.c_list.empty()) {
        write_text(rc.out_dir + "/sweep.csv", "c,verdict,s_c,energy_margin,kinetic_margin,flag_time,flag_reason\n");
        return 0;
    }
    auto grid = make_grid(rc);
    auto ref = solve_reference(rc, grid);
    if (!ref.gs.converged() || !ref.cert.pass) {
        std::cerr << "sweep: reference ground state failed\n";
        return 1;
    }

    struct Row {
        double c;
        std::string text;
    };
    std::vector<Row> rows(rc.c_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rc.c_list.size()) return;
            double c = rc.c_list[i];
            std::ostringstream os;
            try {
                Field u0 = ref.gs.psi;
                for (auto& compv : u0.comp)
                    for (auto& z : compv) z *= c;
                auto cl = classify(rc.spec, u0, ref.thresholds, rc.radial_data);
                EvolveOptions opts = rc.eopts;  // no virial columns in sweep rows
                auto trace = evolve(rc.spec, u0, opts);
                os << fmt(c) << "," << to_string(cl.verdict) << "," << fmt(cl.s_c) << ","
                   << fmt(cl.energy_margin) << "," << fmt(cl.kinetic_margin) << ",";
                if (trace.flag.fired)
                    os << fmt(trace.flag.time) << "," << trace.flag.reason;
                else
                    os << "none,none";
            } catch (const std::exception& e) {
                os << fmt(c) << ",error,,,,," << e.what();
            }
            rows[i] = {c, os.str()};
        }
    };
    int nthreads = std::max(1, rc.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream os;
    os << "c,verdict,s_c,energy_margin,kinetic_margin,flag_time,flag_reason\n";
    for (const auto& row : rows) os << row.text << "\n";
    write_text(rc.out_dir + "/sweep.csv", os.str());
    std::cout << os.str();
    return 0;
}

int cmd_report(const RunConfig& rc) {
    if (rc.snapshot_path.empty()) throw ConfigError("report: set report.snapshot or --snapshot");
    Field u = read_snapshot(rc.snapshot_path);
    auto rep = report(rc.spec, u, rc.omega > 0 ? std::optional<double>(rc.omega) : std::nullopt);
    fs::create_directories(rc.out_dir);
    write_text(rc.out_dir + "/report.txt", rep.to_text());
    std::cout << rep.to_text();
    return 0;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"inls: coupled inhomogeneous NLS workbench"};
    app.fallthrough();
    std::string config_path, out_dir, snapshot, c_list;
    std::uint64_t seed = 0;
    int threads = 0, samples = 0;
    double omega = 0, dt = 0, T = 0, c_scale = 0;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--threads", threads, "worker threads")->envname("INLS_THREADS");

    auto* check = app.add_subcommand("check", "verify hypotheses (H1)-(H8)");
    check->add_option("--samples", samples, "sample count");
    auto* gs = app.add_subcommand("ground-state", "solve and certify a ground state");
    gs->add_option("--omega", omega, "standing-wave frequency");
    auto* ev = app.add_subcommand("evolve", "time evolution with monitors");
    ev->add_option("--dt", dt, "time step");
    ev->add_option("--T", T, "final time");
    ev->add_option("--c", c_scale, "ground-state scaling factor");
    auto* cls = app.add_subcommand("classify", "classify initial data, then evolve");
    cls->add_option("--dt", dt, "time step");
    cls->add_option("--T", T, "final time");
    cls->add_option("--c", c_scale, "ground-state scaling factor");
    auto* sw = app.add_subcommand("sweep", "classification sweep over c values");
    sw->add_option("--c-list", c_list, "space-separated c values");
    sw->add_option("--dt", dt, "time step");
    sw->add_option("--T", T, "final time");
    auto* rep = app.add_subcommand("report", "functional report for a snapshot");
    rep->add_option("--snapshot", snapshot, "field snapshot path");
    rep->add_option("--omega", omega, "frequency for action/Weinstein entries");
    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("inls");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        ConfigFile cfg = config_path.empty() ? ConfigFile{} : ConfigFile::parse_file(config_path);
        if (!out_dir.empty()) cfg.set("run.out", out_dir);
        if (app.count("--seed")) cfg.set("run.seed", std::to_string(seed));
        if (app.count("--threads") || threads > 0) cfg.set("run.threads", std::to_string(threads));
        if (check->count("--samples")) cfg.set("run.samples", std::to_string(samples));
        if (gs->count("--omega") || rep->count("--omega")) cfg.set("groundstate.omega", fmt(omega));
        for (auto* sub : {ev, cls, sw}) {
            auto count = [&](const char* name) {
                auto* opt = sub->get_option_no_throw(name);
                return opt ? opt->count() : 0u;
            };
            if (count("--dt")) cfg.set("evolve.dt", fmt(dt));
            if (count("--T")) cfg.set("evolve.T", fmt(T));
            if (count("--c")) {
                cfg.set("initial.c", fmt(c_scale));
                if (!cfg.has("initial.kind")) cfg.set("initial.kind", "groundstate_scaled");
            }
        }
        if (cls->parsed() && !cfg.has("initial.kind")) cfg.set("initial.kind", "groundstate_scaled");
        if (sw->count("--c-list")) cfg.set("dichotomy.c_list", c_list);
        if (rep->count("--snapshot")) cfg.set("report.snapshot", snapshot);

        RunConfig rc = build_run_config(cfg);
        if (check->parsed()) return cmd_check(rc);
        if (gs->parsed()) return cmd_ground_state(rc);
        if (ev->parsed()) return cmd_evolve(rc);
        if (cls->parsed()) return cmd_classify(rc);
        if (sw->parsed()) return cmd_sweep(rc);
        if (rep->parsed()) return cmd_report(rc);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace inls::cli
