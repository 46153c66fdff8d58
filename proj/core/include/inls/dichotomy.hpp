#pragma once

#include <string>
#include <vector>

#include "inls/evolution.hpp"
#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/interaction.hpp"

namespace inls {

enum class Verdict {
    GlobalSubcritical,
    GlobalMassCritical,
    GlobalIntercritical,
    BlowUpCandidate,
    Indeterminate
};
const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Indeterminate;
    double s_c = 0;
    bool radial = false;
    // compared quantities E(u0)^sc Q(u0)^{1-sc} vs Escript(psi)^sc Q(psi)^{1-sc},
    // and K(u0)^sc Q(u0)^{1-sc} vs K(psi)^sc Q(psi)^{1-sc}
    double energy_lhs = 0, energy_rhs = 0;
    double kinetic_lhs = 0, kinetic_rhs = 0;
    double energy_margin = 0;   // rhs - lhs, signed
    double kinetic_margin = 0;  // rhs - lhs, signed

    std::string to_text() const;
};

// Sharp global-vs-blow-up classifier; thresholds must come from a certified
// ground state in G(1, 0) of the same (n, b) system.
Classification classify(const SystemSpec& spec, const Field& u0, const ThresholdSet& thresholds,
                        bool radial);

// gamma = (beta q)^{-1/(q-1)} and the admissible bound alpha < (1 - 1/q) gamma
// of the bootstrap lemma; rejects q <= 1 or beta <= 0.
struct BootstrapGamma {
    double gamma;
    double alpha_bound;
};
BootstrapGamma bootstrap_gamma(double alpha, double beta, double q);

// T_n = K - (n+2b)/2 P, also assembled from (E, K, L); the two routes agree
// to rounding.
struct PohozaevFunctional {
    double direct;
    double recombined;
    double gap_rel;
};
PohozaevFunctional pohozaev_functional(const SystemSpec& spec, const Field& u);

// -T_n(u); positive along certified blow-up trajectories.
double delta_margin(const SystemSpec& spec, const Field& u, const ThresholdSet& thresholds);

// Radial cutoff: phi = r^2 on [0, R]; on [R, 2R] the derivative follows a
// degree-7 Hermite transition with phi'' <= 2 and 0 <= phi' <= 2r; beyond 2R
// phi stays at the constant (31/14) R^2. (The literal piecewise form with
// phi = 0 beyond 2R is incompatible with phi'' <= 2; see the tests.)
struct CutoffFunction {
    double R = 0;
    std::vector<double> phi, dphi, d2phi, lap, bilap;
    double max_over_r2 = 0;    // max phi - r^2        (<= 0 up to rounding)
    double min_phi = 0;        // >= 0
    double max_d2 = 0;         // <= 2
    double bilap_scale = 0;    // C = max |Lap^2 phi| R^2
};

// Rejects 2R >= r_max; throws if a bound is violated beyond 1e-10.
CutoffFunction build_cutoff(const RadialGrid& grid, double R);

// V, R, and the f-term of the localized virial identity V' = R - f_term.
VirialSample virial_sample(const SystemSpec& spec, const Field& u, const CutoffFunction& cutoff);

// Max defect of the V' identity over interior samples, comparing the centered
// difference of V against the sampled right side. Needs >= 3 uniformly spaced
// virial-bearing rows.
double virial_consistency(const EvolutionTrace& trace);
double virial_consistency(const SystemSpec& spec, const std::vector<Field>& snapshots,
                          const std::vector<double>& times, const CutoffFunction& cutoff);

}  // namespace inls
