#include "inls/functionals.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "inls/cartesian.hpp"

namespace inls {

namespace {

void check_field(const SystemSpec& spec, const Field& u) {
    if (u.components() != spec.components())
        throw std::invalid_argument("functionals: component count mismatch");
    if (!u.is_radial() && !u.cartesian) throw std::invalid_argument("functionals: field has no grid");
}

std::vector<double> mass2(const Field& u) {
    std::vector<double> m(u.components());
    if (u.is_radial()) {
        const auto& g = *u.radial;
        for (int k = 0; k < u.components(); ++k) {
            double s = 0.0;
            for (int j = 0; j < g.points; ++j) s += g.quad_weight[j] * std::norm(u.comp[k][j]);
            m[k] = g.surface * s;
        }
    } else {
        const auto& g = *u.cartesian;
        for (int k = 0; k < u.components(); ++k) {
            double s = 0.0;
            for (auto z : u.comp[k]) s += std::norm(z);
            m[k] = s * g.cell_volume();
        }
    }
    return m;
}

std::vector<double> grad2(const SystemSpec&, const Field& u) {
    std::vector<double> gr(u.components());
    if (u.is_radial()) {
        const auto& g = *u.radial;
        for (int k = 0; k < u.components(); ++k)
            gr[k] = g.surface * dirichlet_form(g, std::span<const Complex>(u.comp[k]),
                                               std::span<const Complex>(u.comp[k]));
    } else {
        const auto& g = *u.cartesian;
        for (int k = 0; k < u.components(); ++k) gr[k] = g.gradient_norm2(u.comp[k]);
    }
    return gr;
}

double potential_integral(const SystemSpec& spec, const Field& u) {
    const int l = spec.components();
    std::vector<Complex> z(l);
    double s = 0.0;
    if (u.is_radial()) {
        // Quadrature through the operator-fitted weight: this is the P whose
        // pairing with the nonlinearity is exact (Re sum f_k conj(u_k) = 3 Re F
        // holds pointwise), so P = 2I comes out clean on discrete solutions.
        const auto& g = *u.radial;
        auto w = g.singular_weight(spec.b);
        for (int j = 0; j < g.points; ++j) {
            for (int k = 0; k < l; ++k) z[k] = u.comp[k][j];
            s += g.quad_weight[j] * w[j] * eval_potential(spec.potential, z).real();
        }
        return g.surface * s;
    }
    const auto& g = *u.cartesian;
    auto w = g.singular_weight(spec.b);
    for (std::size_t j = 0; j < w.size(); ++j) {
        for (int k = 0; k < l; ++k) z[k] = u.comp[k][j];
        s += w[j] * eval_potential(spec.potential, z).real();
    }
    return s * g.cell_volume();
}

}  // namespace

Criticality critical_index(int n, double b) {
    if (n < 2 || n > 5) throw std::invalid_argument("critical_index: n must be in 2..5");
    if (!(b >= 0.0 && b < std::min(2.0, n / 2.0)))
        throw std::invalid_argument("critical_index: need 0 <= b < min(2, n/2)");
    Criticality c;
    double s = n + 2.0 * b;
    c.s_c = (s - 4.0) / 2.0;
    c.l2 = s < 4.0 ? AxisClass::Subcritical : (s == 4.0 ? AxisClass::Critical : AxisClass::Supercritical);
    c.h1 = s < 6.0 ? AxisClass::Subcritical : (s == 6.0 ? AxisClass::Critical : AxisClass::Supercritical);
    if (s < 4.0)
        c.label = CriticalityLabel::L2Subcritical;
    else if (s == 4.0)
        c.label = CriticalityLabel::L2Critical;
    else if (s < 6.0)
        c.label = CriticalityLabel::Intercritical;
    else if (s == 6.0)
        c.label = CriticalityLabel::EnergyCritical;
    else
        c.label = CriticalityLabel::EnergySupercritical;
    return c;
}

const char* to_string(CriticalityLabel label) {
    switch (label) {
        case CriticalityLabel::L2Subcritical: return "L2-subcritical";
        case CriticalityLabel::L2Critical: return "L2-critical";
        case CriticalityLabel::Intercritical: return "intercritical";
        case CriticalityLabel::EnergyCritical: return "energy-critical";
        case CriticalityLabel::EnergySupercritical: return "energy-supercritical";
    }
    return "?";
}

double charge(const SystemSpec& spec, const Field& u) {
    check_field(spec, u);
    auto m = mass2(u);
    double q = 0.0;
    for (int k = 0; k < spec.components(); ++k) q += spec.alpha[k] * spec.sigma[k] * m[k];
    return q;
}

FunctionalReport report(const SystemSpec& spec, const Field& u, std::optional<double> omega) {
    check_field(spec, u);
    FunctionalReport rep;
    auto m = mass2(u);
    auto gr = grad2(spec, u);
    for (int k = 0; k < spec.components(); ++k) {
        rep.Q += spec.alpha[k] * spec.sigma[k] * m[k];
        rep.K += spec.gamma[k] * gr[k];
        rep.L += spec.beta[k] * m[k];
    }
    rep.P = potential_integral(spec, u);
    rep.E = rep.K + rep.L - 2.0 * rep.P;
    rep.crit = critical_index(spec.dim, spec.b);
    if (omega) {
        auto bk = spec.zero_order_coefficients(*omega);
        double qc = 0.0;
        for (int k = 0; k < spec.components(); ++k) {
            if (!(bk[k] > 0)) {
                std::ostringstream os;
                os << "report: b_" << k << " = " << bk[k] << " <= 0 at omega = " << *omega;
                throw std::invalid_argument(os.str());
            }
            qc += bk[k] * m[k];
        }
        rep.Qcal = qc;
        rep.I = 0.5 * (rep.K + qc) - rep.P;
        if (rep.P != 0.0) {
            double s = spec.dim + 2.0 * spec.b;
            rep.J = std::pow(qc, (6.0 - s) / 4.0) * std::pow(rep.K, s / 4.0) / rep.P;
        }
    }
    return rep;
}

FunctionalReport energy(const SystemSpec& spec, const Field& u) { return report(spec, u, std::nullopt); }

double action(const SystemSpec& spec, const Field& u, double omega) {
    auto rep = report(spec, u, omega);
    return *rep.I;
}

std::optional<double> weinstein(const SystemSpec& spec, const Field& u, double omega) {
    return report(spec, u, omega).J;
}

std::array<double, 3> pohozaev_residuals(const SystemSpec& spec, const Field& psi, double omega) {
    auto rep = report(spec, psi, omega);
    double s = spec.dim + 2.0 * spec.b;
    double I = *rep.I;
    double rP = std::abs(rep.P - 2.0 * I);
    double rK = std::abs(rep.K - s * I);
    double rQ = std::abs(*rep.Qcal - (6.0 - s) * I);
    if (I != 0.0) {
        rP /= std::abs(I);
        rK /= (rep.K != 0.0 ? rep.K : 1.0);
        rQ /= (*rep.Qcal != 0.0 ? *rep.Qcal : 1.0);
    }
    return {rP, rK, rQ};
}

ThresholdSet thresholds_from_profile(const SystemSpec& spec, const Field& psi, double omega) {
    double s = spec.dim + 2.0 * spec.b;
    if (!(s < 6.0)) throw std::invalid_argument("thresholds: need n + 2b < 6");
    auto rep = report(spec, psi, omega);
    if (!rep.J) throw std::invalid_argument("thresholds: P(psi) == 0");
    ThresholdSet t;
    t.dim = spec.dim;
    t.b = spec.b;
    t.Q = *rep.Qcal;
    t.K = rep.K;
    t.Escript = rep.K - 2.0 * rep.P;
    t.xi1_closed = 0.5 * std::pow(s, s / 4.0) * std::pow(6.0 - s, (4.0 - s) / 4.0) * std::sqrt(t.Q);
    t.xi1_direct = *rep.J;
    t.xi1_gap_rel = std::abs(t.xi1_closed - t.xi1_direct) / t.xi1_closed;
    t.C_op = 2.0 * std::pow(6.0 - s, (s - 4.0) / 4.0) / (std::pow(s, s / 4.0) * std::sqrt(t.Q));
    return t;
}

std::string FunctionalReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "Q = " << Q << "\n";
    os << "K = " << K << "\n";
    os << "L = " << L << "\n";
    os << "P = " << P << "\n";
    os << "E = " << E << "\n";
    os << "s_c = " << crit.s_c << "\n";
    os << "criticality = " << to_string(crit.label) << "\n";
    if (Qcal) os << "Qcal = " << *Qcal << "\n";
    if (I) os << "I = " << *I << "\n";
    if (J) os << "J = " << *J << "\n";
    return os.str();
}

}  // namespace inls
