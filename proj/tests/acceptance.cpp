// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "inls/cartesian.hpp"
#include "inls/dichotomy.hpp"
#include "inls/evolution.hpp"
#include "inls/groundstate.hpp"
#include "inls/presets.hpp"
#include "inls/rng.hpp"
#include "oracles.hpp"

using namespace inls;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Field scaled(const Field& psi, double c) {
    Field u = psi;
    for (auto& comp : u.comp)
        for (auto& z : comp) z *= c;
    return u;
}

// ---------------------------------------------------------------- criterion 1
Criterion hypothesis_suite() {
    Criterion c;
    double worst = 0.0, worst_remark = 0.0;
    std::vector<SystemSpec> systems{two_wave(3, 0.5, 1.0), three_wave_a(3, 0.5, 1.0, 1.0),
                                    three_wave_b(3, 0.5, 1.0, 1.0)};
    for (const auto& spec : systems) {
        auto rep = check_hypotheses(spec, 1000, 42);
        for (const HypothesisItem* it : {&rep.h1, &rep.h3, &rep.h4, &rep.h5, &rep.h7, &rep.h8}) {
            c.require(it->checked && it->pass, spec.name + ": hypothesis failed");
            worst = std::max(worst, it->residual);
        }
        worst_remark = std::max(worst_remark, rep.remark.residual);
        c.require(rep.remark.pass, spec.name + ": charge identity failed");
    }
    c.require(worst <= 1e-12, "worst residual " + num(worst) + " > 1e-12");
    c.require(worst_remark <= 1e-13, "remark residual " + num(worst_remark) + " > 1e-13");
    c.note("worst " + num(worst) + ", remark " + num(worst_remark));
    return c;
}

// ---------------------------------------------------------------- criterion 2
Criterion groundstate_certification() {
    Criterion c;
    GroundStateOptions opts;
    auto grid = std::make_shared<RadialGrid>(3, 4096, 40.0);

    auto spec1 = single_quadratic(3, 0.5);
    auto gs1 = solve(spec1, 1.0, grid, opts);
    c.require(gs1.converged(), "scalar solve did not converge");
    c.require(gs1.iterations < 500, "scalar solve needed " + std::to_string(gs1.iterations));
    c.require(gs1.pde_residual[0] <= 1e-8, "scalar residual " + num(gs1.pde_residual[0]));
    oracles::ShootingGroundState oracle(0.5, 1.0);
    auto profile = oracle.profile(grid->r);
    double sup = 0.0;
    for (int j = 0; j < grid->points; ++j)
        sup = std::max(sup, std::abs(gs1.psi.comp[0][j].real() - profile[j]));
    c.require(sup <= 1e-4, "shooting sup error " + num(sup) + " > 1e-4");
    for (double r : gs1.pohozaev) c.require(r <= 1e-3, "scalar pohozaev " + num(r));

    auto spec2 = two_wave(3, 0.6, 1.0);
    auto gs2 = solve(spec2, 1.0, grid, opts);
    c.require(gs2.converged(), "two-wave solve did not converge");
    for (double r : gs2.pohozaev) c.require(r <= 1e-3, "two-wave pohozaev " + num(r));
    c.note("iters " + std::to_string(gs1.iterations) + "/" + std::to_string(gs2.iterations) +
           ", shooting sup " + num(sup) + ", pohozaev " +
           num(std::max(gs1.pohozaev[1], gs2.pohozaev[1])));
    return c;
}

// ---------------------------------------------------------------- criterion 3
Criterion sharp_constant() {
    Criterion c;
    GroundStateOptions opts;
    auto grid = std::make_shared<RadialGrid>(3, 4096, 40.0);
    auto spec = single_quadratic(3, 0.5);
    auto gs = solve(spec, 1.0, grid, opts);
    c.require(gs.converged(), "solve failed");
    auto th = thresholds_from_groundstate(spec, gs);
    c.require(th.xi1_gap_rel <= 1e-4, "xi1 two-path gap " + num(th.xi1_gap_rel) + " > 1e-4");
    Rng rng(1234);
    double worst_quotient = 1e300;
    int trials = 0;
    for (int t = 0; t < 100; ++t) {
        auto f = Field::zeros(grid, 1);
        double a1 = rng.uniform(0.2, 3.0), a2 = rng.uniform(0.0, 2.0);
        double w1 = rng.uniform(0.5, 4.0), w2 = rng.uniform(0.5, 4.0);
        for (int j = 0; j < grid->points; ++j) {
            double r = grid->r[j];
            f.comp[0][j] = a1 * std::exp(-(r / w1) * (r / w1)) + a2 * std::exp(-(r / w2) * (r / w2));
        }
        auto rep = report(spec, f, 1.0);
        if (!rep.J) continue;
        ++trials;
        worst_quotient = std::min(worst_quotient, *rep.J / th.xi1_closed);
    }
    c.require(trials == 100, "lost trials with P = 0");
    c.require(worst_quotient >= 1.0 - 1e-2,
              "sampled J/xi1 " + num(worst_quotient) + " < 1 - 1e-2");
    c.note("gap " + num(th.xi1_gap_rel) + ", min J/xi1 " + num(worst_quotient));
    return c;
}

// ---------------------------------------------------------------- criterion 4
EvolutionTrace conservation_trace(double dt, const VirialSampler& sampler) {
    auto spec = two_wave(2, 0.5, 1.0);
    auto grid = std::make_shared<RadialGrid>(2, 4096, 40.0);
    Field u0 = Field::zeros(grid, 2);
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < grid->points; ++j)
            u0.comp[k][j] = std::exp(-grid->r[j] * grid->r[j]);
    EvolveOptions opts;
    opts.dt = dt;
    opts.T = 1.0;
    opts.monitor_stride = 10;
    opts.virial_sampler = sampler;
    return evolve(spec, u0, opts);
}

Criterion conservation() {
    Criterion c;
    auto tr = conservation_trace(1e-4, {});
    c.require(!tr.flag.fired, "flagged: " + tr.flag.reason);
    double q0 = tr.rows.front().Q, e0 = tr.rows.front().E;
    double qd = 0.0, ed = 0.0;
    for (const auto& row : tr.rows) {
        qd = std::max(qd, std::abs(row.Q - q0) / q0);
        ed = std::max(ed, std::abs(row.E - e0) / std::abs(e0));
    }
    c.require(qd <= 1e-8, "Q drift " + num(qd) + " > 1e-8");
    c.require(ed <= 1e-6, "E drift " + num(ed) + " > 1e-6");
    c.note("Q drift " + num(qd) + ", E drift " + num(ed));
    return c;
}

// ---------------------------------------------------------------- criterion 5
Criterion standing_wave() {
    Criterion c;
    auto spec = two_wave(3, 0.6, 1.0);
    auto grid = std::make_shared<RadialGrid>(3, 1024, 12.0);
    GroundStateOptions gopts;
    auto gs = solve(spec, 1.0, grid, gopts);
    auto cert = certify(spec, gs, gopts);
    c.require(cert.pass, "reference state failed certification");
    auto err_at = [&](double dt) {
        EvolveOptions opts;
        opts.dt = dt;
        opts.T = 1.0;
        opts.monitor_stride = 1 << 30;
        auto tr = evolve(spec, gs.psi, opts);
        double t = tr.rows.back().t;
        double err = 0.0;
        for (int k = 0; k < spec.components(); ++k) {
            Complex ph = std::polar(1.0, spec.sigma[k] * gs.omega * t);
            for (int j = 0; j < grid->points; ++j)
                err = std::max(err, std::abs(tr.final_state.comp[k][j] - ph * gs.psi.comp[k][j]));
        }
        return err;
    };
    double e1 = err_at(8e-6);
    double e2 = err_at(4e-6);
    c.require(e1 <= 1e-4, "sup error " + num(e1) + " > 1e-4");
    c.require(e1 / e2 >= 3.5 && e1 / e2 <= 4.5, "refinement factor " + num(e1 / e2));
    c.note("err " + num(e1) + ", refinement " + num(e1 / e2));
    return c;
}

// ---------------------------------------------------------------- criterion 6
Criterion dichotomy_benchmark() {
    Criterion c;
    auto spec = two_wave(3, 0.6, 1.0);
    auto grid = std::make_shared<RadialGrid>(3, 4096, 40.0);
    GroundStateOptions gopts;
    auto gs = solve(spec, 1.0, grid, gopts);
    auto cert = certify(spec, gs, gopts);
    c.require(cert.pass, "reference state failed certification");
    auto th = cert.thresholds;
    const double sc = critical_index(spec.dim, spec.b).s_c;

    // global side: c = 0.9
    {
        auto u0 = scaled(gs.psi, 0.9);
        auto cl = classify(spec, u0, th, true);
        c.require(cl.verdict == Verdict::GlobalIntercritical,
                  std::string("c=0.9 verdict ") + to_string(cl.verdict));
        EvolveOptions opts;
        opts.dt = 2e-4;
        opts.T = 2.0;
        opts.monitor_stride = 10;
        auto tr = evolve(spec, u0, opts);
        c.require(!tr.flag.fired, "c=0.9 flagged: " + tr.flag.reason);
        double rhs = std::pow(th.K, sc) * std::pow(th.Q, 1.0 - sc);
        double q0 = tr.rows.front().Q;
        double worst = 0.0;
        for (const auto& row : tr.rows)
            worst = std::max(worst, std::pow(row.K, sc) * std::pow(q0, 1.0 - sc));
        c.require(worst < rhs, "c=0.9 kinetic threshold crossed: " + num(worst) + " vs " + num(rhs));
    }

    // blow-up side: c = 1.1, radial, dt-refined detection agreement
    {
        auto u0 = scaled(gs.psi, 1.1);
        auto cl = classify(spec, u0, th, true);
        c.require(cl.verdict == Verdict::BlowUpCandidate,
                  std::string("c=1.1 verdict ") + to_string(cl.verdict));
        double t_n0 = pohozaev_functional(spec, u0).direct;
        double margin_floor = 0.5 * std::abs(t_n0);
        double fire[2] = {0, 0};
        int i = 0;
        for (double dt : {2e-4, 1e-4}) {
            EvolveOptions opts;
            opts.dt = dt;
            opts.T = 2.0;
            opts.monitor_stride = 10;
            auto tr = evolve(spec, u0, opts);
            c.require(tr.flag.fired, "c=1.1 did not flag before T=2 at dt " + num(dt));
            fire[i++] = tr.flag.fired ? tr.flag.time : -1.0;
            const double s = spec.dim + 2.0 * spec.b;
            for (const auto& row : tr.rows) {
                if (row.t == 0.0) continue;
                if (!std::isfinite(row.K) || !std::isfinite(row.P)) break;
                double tn = row.K - 0.5 * s * row.P;
                c.require(tn <= -margin_floor,
                          "T_n margin violated at t " + num(row.t) + " (" + num(tn) + ")");
            }
        }
        if (fire[0] > 0 && fire[1] > 0) {
            double rel = std::abs(fire[0] - fire[1]) / fire[0];
            c.require(rel <= 0.05, "detection times " + num(fire[0]) + "/" + num(fire[1]) +
                                       " differ by " + num(rel));
            c.note("flags at t " + num(fire[0]) + "/" + num(fire[1]));
        }
    }
    return c;
}

// ---------------------------------------------------------------- criterion 7
Criterion virial_identity() {
    Criterion c;
    auto spec = two_wave(2, 0.5, 1.0);
    auto grid = std::make_shared<RadialGrid>(2, 4096, 40.0);
    auto cut = std::make_shared<CutoffFunction>(build_cutoff(*grid, 10.0));
    VirialSampler sampler = [&spec, cut](const Field& u, double t) {
        auto s = virial_sample(spec, u, *cut);
        s.t = t;
        return s;
    };
    auto d1_trace = conservation_trace(1e-4, sampler);
    c.require(!d1_trace.flag.fired, "flagged");
    double d1 = virial_consistency(d1_trace);
    auto d2_trace = conservation_trace(5e-5, sampler);
    double d2 = virial_consistency(d2_trace);
    c.require(d1 <= 1e-4, "defect " + num(d1) + " > 1e-4");
    c.require(d2 < d1, "halving dt did not reduce the defect (" + num(d1) + " -> " + num(d2) + ")");
    c.note("defect " + num(d1) + " -> " + num(d2));
    return c;
}

// ---------------------------------------------------------------- criterion 8
Criterion scaling_symmetry() {
    Criterion c;
    auto spec = two_wave(2, 0.5, 1.0);  // beta = 0
    auto grid = std::make_shared<CartesianGrid>(2, 128, 12.0);
    Field u0 = Field::zeros(grid, 2);
    for (int k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < grid->total(); ++i) {
            double r = grid->radius(i);
            u0.comp[k][i] = std::exp(-r * r);
        }
    double disc = scaling_check(spec, u0, 2.0, 0.25, 1e-3);
    c.require(disc <= 1e-5, "discrepancy " + num(disc) + " > 1e-5");
    c.note("discrepancy " + num(disc));
    return c;
}

// ---------------------------------------------------------------- criterion 9
Criterion cutoff_contract() {
    Criterion c;
    RadialGrid grid(3, 4096, 40.0);
    for (double R : {5.0, 10.0}) {
        CutoffFunction cut;
        try {
            cut = build_cutoff(grid, R);
        } catch (const std::exception& e) {
            c.require(false, std::string("build_cutoff threw: ") + e.what());
            continue;
        }
        c.require(cut.max_over_r2 <= 1e-10, "phi > r^2 at R " + num(R));
        c.require(cut.min_phi >= -1e-10, "phi < 0 at R " + num(R));
        c.require(cut.max_d2 <= 2.0 + 1e-10, "phi'' > 2 at R " + num(R));
        double C = cut.bilap_scale;
        for (int j = 0; j < grid.points; ++j)
            c.require(std::abs(cut.bilap[j]) <= C / (R * R) + 1e-10, "bilaplacian bound");
        c.note("R " + num(R) + ": max phi'' " + num(cut.max_d2) + ", C " + num(C));
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Criterion()> run;
    };
    const Entry entries[] = {
        {"hypothesis suite", hypothesis_suite},
        {"ground-state certification", groundstate_certification},
        {"sharp-constant consistency", sharp_constant},
        {"conservation", conservation},
        {"standing-wave fidelity", standing_wave},
        {"dichotomy benchmark", dichotomy_benchmark},
        {"virial identity", virial_identity},
        {"scaling symmetry", scaling_symmetry},
        {"cutoff contract", cutoff_contract},
    };
    int failures = 0;
    int idx = 0;
    for (const auto& entry : entries) {
        ++idx;
        auto t0 = Clock::now();
        Criterion result;
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("criterion %d [%s]: %s (%s; %.1f s)\n", idx, entry.name,
                    result.pass ? "PASS" : "FAIL", result.detail.c_str(), dt);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures;
}
