#pragma once

#include <array>
#include <optional>
#include <string>

#include "inls/grid.hpp"
#include "inls/interaction.hpp"

namespace inls {

enum class AxisClass { Subcritical, Critical, Supercritical };
enum class CriticalityLabel {
    L2Subcritical,
    L2Critical,
    Intercritical,
    EnergyCritical,
    EnergySupercritical
};

struct Criticality {
    double s_c;
    AxisClass l2;
    AxisClass h1;
    CriticalityLabel label;
};

// s_c = (n + 2b - 4)/2 with the case split on n+2b against 4 and 6.
Criticality critical_index(int n, double b);
const char* to_string(CriticalityLabel label);

struct FunctionalReport {
    double Q = 0;  // sum alpha_k sigma_k |u_k|_2^2
    double K = 0;  // sum gamma_k |grad u_k|_2^2
    double L = 0;  // sum beta_k |u_k|_2^2
    double P = 0;  // Re int |x|^-b F(u)
    double E = 0;  // K + L - 2P
    Criticality crit{};
    std::optional<double> Qcal;  // sum b_k |u_k|_2^2, needs omega
    std::optional<double> I;     // action, needs omega
    std::optional<double> J;     // Weinstein quotient, absent when P == 0

    std::string to_text() const;  // one functional per line
};

double charge(const SystemSpec& spec, const Field& u);
FunctionalReport energy(const SystemSpec& spec, const Field& u);
FunctionalReport report(const SystemSpec& spec, const Field& u, std::optional<double> omega);

// I = (1/2)[K + sum b_k |psi_k|^2] - P; rejects omega with some b_k <= 0.
double action(const SystemSpec& spec, const Field& u, double omega);

// J = Qcal^{(6-n-2b)/4} K^{(n+2b)/4} / P; empty when P == 0.
std::optional<double> weinstein(const SystemSpec& spec, const Field& u, double omega);

// Relative residuals of P = 2I, K = (n+2b) I, Qcal = (6-n-2b) I.
// Residuals are absolute when I == 0.
std::array<double, 3> pohozaev_residuals(const SystemSpec& spec, const Field& psi, double omega);

struct ThresholdSet {
    int dim = 0;
    double b = 0;
    double Q = 0;        // Q(psi) = Qcal(psi) on G(1, 0)
    double K = 0;        // K(psi)
    double Escript = 0;  // K(psi) - 2 P(psi)
    double xi1_closed = 0;
    double xi1_direct = 0;
    double xi1_gap_rel = 0;
    double C_op = 0;  // sharp constant; C_op * xi1 = 1
};

ThresholdSet thresholds_from_profile(const SystemSpec& spec, const Field& psi, double omega);

}  // namespace inls
