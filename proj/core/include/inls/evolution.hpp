#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inls/grid.hpp"
#include "inls/interaction.hpp"

namespace inls {

// One virial sample along a trace; filled by the dichotomy module.
struct VirialSample {
    double t = 0;
    double V = 0;       // int phi sum (alpha_k^2/gamma_k) |u_k|^2
    double R = 0;       // 2 sum alpha_k Im int phi' (x.grad u_k / r) conj(u_k)
    double f_term = 0;  // 4 int phi Im sum m_k |x|^{-b} f_k(u) conj(u_k)
    double rhs = 0;     // R - f_term, the right side of the V' identity
    double margin = 0;  // -T_n(u), the Pohozaev-functional margin
};

using VirialSampler = std::function<VirialSample(const Field&, double t)>;

struct EvolveOptions {
    double dt = 1e-3;
    double T = 1.0;
    int monitor_stride = 10;
    int nonlinear_substeps = 1;
    double kmax_multiplier = 100.0;  // blow-up when K(t) > multiplier * K(0)
    double tail_fraction = 0.1;      // resolution-loss threshold on the gradient tail
    VirialSampler virial_sampler;    // optional extra columns
    int snapshot_stride = 0;         // field snapshots every so many monitor rows; 0 = off
    std::string snapshot_dir;
};

struct BlowupFlag {
    bool fired = false;
    double time = 0;
    std::string reason;  // "kinetic-threshold" | "resolution-loss" | "overflow"
};

struct TraceRow {
    double t = 0;
    double Q = 0, E = 0, K = 0, L = 0, P = 0;
    std::vector<double> grad;  // per-component gradient norms
    double grad_tail = 0;      // fraction of gradient energy at grid scale
    std::optional<VirialSample> virial;
};

struct EvolutionTrace {
    std::vector<TraceRow> rows;
    BlowupFlag flag;
    double dt = 0;
    int monitor_stride = 0;
    Field final_state;  // state at the last completed step

    std::string to_csv() const;  // header + one row per sample
};

// Free flow U_k(dt/2) = exp(i (dt/2 alpha_k) (gamma_k Lap - beta_k)); exact
// Fourier multiplier on the Cartesian backend, one Crank-Nicolson step of the
// same generator on the radial backend (unitary in the grid metric).
Field linear_half_step(const SystemSpec& spec, const Field& state, double dt);

// Pointwise flow of i alpha_k d_t u_k = -|x|^{-b} f_k(u) by classical RK4
// substeps; nodes at exact zero stay exactly zero.
Field nonlinear_step(const SystemSpec& spec, const Field& state, double dt, int substeps = 1);

// Strang composition (linear half, nonlinear, linear half) with conservation
// monitors and blow-up detection; terminates early when a criterion fires.
EvolutionTrace evolve(const SystemSpec& spec, const Field& u0, const EvolveOptions& opts);

// Scaling symmetry w = lambda^{2-b} u(lambda x, lambda^2 t) for beta = 0:
// evolves u0 to lambda^2 T, rescales, and compares against evolving the
// pre-scaled data to T with the parabolically matched step dt/lambda^2.
// Returns the sup-norm discrepancy.
double scaling_check(const SystemSpec& spec, const Field& u0, double lambda, double T, double dt);

BlowupFlag detect_blowup(const EvolutionTrace& trace, const EvolveOptions& opts);

}  // namespace inls
