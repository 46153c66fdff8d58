#pragma once

#include <array>
#include <memory>
#include <vector>

#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/interaction.hpp"

namespace inls {

struct GroundStateOptions {
    int max_iterations = 2000;
    double tol = 1e-8;             // PDE residual, weighted L^2
    double stabilizer_tol = 1e-10; // |S - 1|
    std::vector<double> init_amplitude;  // per component; default 1
    std::vector<double> init_width;      // Gaussian exp(-(r/width)^2); default 1
    // Undamped updates can lock into a period-2 cycle on coupled systems.
    double damping = 0.5;  // in (0, 1]
};

enum class SolveStatus { Converged, MaxIterations, TrivialAttractor };
const char* to_string(SolveStatus s);

struct GroundStateResult {
    SolveStatus status = SolveStatus::MaxIterations;
    Field psi;  // real-valued radial profiles
    double omega = 0;
    std::vector<double> bk;  // alpha_k sigma_k omega + beta_k
    int iterations = 0;
    std::vector<double> pde_residual;      // per component at exit
    std::vector<double> residual_history;  // max over components, one per iteration
    double stabilizer_gap = 0;             // |S - 1| at exit
    FunctionalReport functionals;
    std::array<double, 3> pohozaev{0, 0, 0};

    bool converged() const { return status == SolveStatus::Converged; }
};

// Stabilized fixed-point iteration for
//   -gamma_k Lap psi_k + b_k psi_k = |x|^{-b} f_k(psi),
// psi^{m+1}_k = S_m^2 (-gamma_k Lap + b_k)^{-1}[w f_k(psi^m)] with the global
// factor S_m = <L psi, psi> / <w f(psi), psi>. Rejects omega with some b_k <= 0.
GroundStateResult solve(const SystemSpec& spec, double omega,
                        std::shared_ptr<const RadialGrid> grid, const GroundStateOptions& opts);

struct Certification {
    bool residual_ok = false;      // per-component residual <= 10 tol
    bool pohozaev_ok = false;      // relative residuals <= 1e-3
    bool positivity_ok = false;    // min psi >= -1e-10
    bool monotonicity_ok = false;  // radially non-increasing up to 1e-8
    bool xi1_gap_ok = false;       // two-path xi_1 gap <= 1e-4
    bool pass = false;
    ThresholdSet thresholds;
    double min_value = 0;
    double max_increase = 0;
};

Certification certify(const SystemSpec& spec, const GroundStateResult& gs,
                      const GroundStateOptions& opts);

inline ThresholdSet thresholds_from_groundstate(const SystemSpec& spec, const GroundStateResult& gs) {
    return thresholds_from_profile(spec, gs.psi, gs.omega);
}

struct OmegaSweepRow {
    double omega = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    double Qcal = 0;
    double xi1 = 0;
    int iterations = 0;
};

std::vector<OmegaSweepRow> omega_sweep(const SystemSpec& spec, const std::vector<double>& omegas,
                                       std::shared_ptr<const RadialGrid> grid,
                                       const GroundStateOptions& opts);

}  // namespace inls
