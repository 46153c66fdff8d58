#include "inls/dichotomy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace inls {

namespace {

// sign(x) |x|^p: monotone continuation of x^p to negative bases, so the
// threshold comparisons stay meaningful when E(u0) < 0.
double spow(double x, double p) { return x >= 0.0 ? std::pow(x, p) : -std::pow(-x, p); }

// Transition profile for phi' on [R, 2R]: phi'(R(1+s)) = 2R p(s) with
//   p(s) = 1 + s - 55 s^4 + 129 s^5 - 106 s^6 + 30 s^7,
// the degree-7 Hermite match of (p, p', p'', p''') = (1,1,0,0) at s=0 and
// (0,0,0,0) at s=1. Then max phi'' = 2 (attained at r = R) and phi' >= 0.
double p_poly(double s, int deriv) {
    static const double c[8] = {1, 1, 0, 0, -55, 129, -106, 30};
    double acc = 0.0;
    for (int i = 7; i >= deriv; --i) {
        double f = 1.0;
        for (int k = 0; k < deriv; ++k) f *= (i - k);
        acc = acc * s + f * c[i];
    }
    return acc;
}

// int_0^s p = s + s^2/2 - 11 s^5 + 21.5 s^6 - (106/7) s^7 + (30/8) s^8
double p_integral(double s) {
    static const double ci[9] = {0, 1, 0.5, 0, 0, -11, 21.5, -106.0 / 7.0, 3.75};
    double acc = 0.0;
    for (int i = 8; i >= 1; --i) acc = (acc + ci[i]) * s;
    return acc;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::GlobalSubcritical: return "GlobalSubcritical";
        case Verdict::GlobalMassCritical: return "GlobalMassCritical";
        case Verdict::GlobalIntercritical: return "GlobalIntercritical";
        case Verdict::BlowUpCandidate: return "BlowUpCandidate";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

Classification classify(const SystemSpec& spec, const Field& u0, const ThresholdSet& thresholds,
                        bool radial) {
    if (thresholds.dim != spec.dim || thresholds.b != spec.b)
        throw std::invalid_argument("classify: thresholds built for a different (n, b)");
    auto rep = energy(spec, u0);
    Classification cl;
    cl.radial = radial;
    cl.s_c = rep.crit.s_c;
    const double s = spec.dim + 2.0 * spec.b;
    const double sc = cl.s_c;
    const double Q0 = rep.Q;

    if (sc > 0.0 && sc < 1.0) {
        cl.energy_lhs = spow(rep.E, sc) * std::pow(Q0, 1.0 - sc);
        cl.energy_rhs = std::pow(thresholds.Escript, sc) * std::pow(thresholds.Q, 1.0 - sc);
        cl.kinetic_lhs = std::pow(rep.K, sc) * std::pow(Q0, 1.0 - sc);
        cl.kinetic_rhs = std::pow(thresholds.K, sc) * std::pow(thresholds.Q, 1.0 - sc);
        cl.energy_margin = cl.energy_rhs - cl.energy_lhs;
        cl.kinetic_margin = cl.kinetic_rhs - cl.kinetic_lhs;
    }

    if (s < 4.0) {
        // Theorem range for unconditional H^1 global existence: 2 <= n <= 3.
        cl.verdict = (spec.dim <= 3) ? Verdict::GlobalSubcritical : Verdict::Indeterminate;
    } else if (s == 4.0) {
        cl.energy_lhs = Q0;
        cl.energy_rhs = thresholds.Q;
        cl.energy_margin = cl.energy_rhs - cl.energy_lhs;
        cl.verdict = (spec.dim == 3 && Q0 < thresholds.Q) ? Verdict::GlobalMassCritical
                                                          : Verdict::Indeterminate;
    } else if (s < 6.0) {
        bool energy_cond = cl.energy_lhs < cl.energy_rhs;
        if (energy_cond && cl.kinetic_lhs < cl.kinetic_rhs && spec.b < 1.0)
            cl.verdict = Verdict::GlobalIntercritical;
        else if (energy_cond && cl.kinetic_lhs > cl.kinetic_rhs && radial)
            cl.verdict = Verdict::BlowUpCandidate;
        else
            cl.verdict = Verdict::Indeterminate;
    } else {
        cl.verdict = Verdict::Indeterminate;
    }
    return cl;
}

BootstrapGamma bootstrap_gamma(double alpha, double beta, double q) {
    if (!(q > 1.0)) throw std::invalid_argument("bootstrap_gamma: need q > 1");
    if (!(beta > 0.0)) throw std::invalid_argument("bootstrap_gamma: need beta > 0");
    (void)alpha;
    BootstrapGamma out;
    out.gamma = std::pow(beta * q, -1.0 / (q - 1.0));
    out.alpha_bound = (1.0 - 1.0 / q) * out.gamma;
    return out;
}

PohozaevFunctional pohozaev_functional(const SystemSpec& spec, const Field& u) {
    auto rep = energy(spec, u);
    const double s = spec.dim + 2.0 * spec.b;
    PohozaevFunctional t;
    t.direct = rep.K - 0.5 * s * rep.P;
    t.recombined = 0.25 * s * rep.E - 0.25 * (s - 4.0) * rep.K - 0.25 * s * rep.L;
    t.gap_rel = std::abs(t.direct - t.recombined) / std::max(std::abs(t.direct), 1e-300);
    return t;
}

double delta_margin(const SystemSpec& spec, const Field& u, const ThresholdSet& thresholds) {
    if (thresholds.dim != spec.dim || thresholds.b != spec.b)
        throw std::invalid_argument("delta_margin: thresholds built for a different (n, b)");
    return -pohozaev_functional(spec, u).direct;
}

CutoffFunction build_cutoff(const RadialGrid& grid, double R) {
    if (!(R > 0) || 2.0 * R >= grid.r_max)
        throw std::invalid_argument("build_cutoff: need 0 < 2R < r_max");
    const int n = grid.dim;
    const int N = grid.points;
    CutoffFunction c;
    c.R = R;
    c.phi.resize(N);
    c.dphi.resize(N);
    c.d2phi.resize(N);
    c.lap.resize(N);
    c.bilap.resize(N);
    const double tail = (1.0 + 2.0 * p_integral(1.0)) * R * R;  // (31/14) R^2

    for (int j = 0; j < N; ++j) {
        double r = grid.r[j];
        double phi, d1, d2, d3, d4;
        if (r <= R) {
            phi = r * r;
            d1 = 2.0 * r;
            d2 = 2.0;
            d3 = d4 = 0.0;
        } else if (r >= 2.0 * R) {
            phi = tail;
            d1 = d2 = d3 = d4 = 0.0;
        } else {
            double sN = (r - R) / R;
            phi = R * R * (1.0 + 2.0 * p_integral(sN));
            d1 = 2.0 * R * p_poly(sN, 0);
            d2 = 2.0 * p_poly(sN, 1);
            d3 = 2.0 / R * p_poly(sN, 2);
            d4 = 2.0 / (R * R) * p_poly(sN, 3);
        }
        c.phi[j] = phi;
        c.dphi[j] = d1;
        c.d2phi[j] = d2;
        if (r == 0.0) {
            c.lap[j] = n * d2;
            c.bilap[j] = 0.0;  // phi = r^2 near the origin
        } else {
            c.lap[j] = d2 + (n - 1) * d1 / r;
            c.bilap[j] = d4 + 2.0 * (n - 1) * d3 / r + (n - 1) * (n - 3) * (d2 / (r * r) - d1 / (r * r * r));
        }
        c.max_over_r2 = std::max(c.max_over_r2, phi - r * r);
        c.min_phi = std::min(c.min_phi, phi);
        c.max_d2 = std::max(c.max_d2, d2);
        c.bilap_scale = std::max(c.bilap_scale, std::abs(c.bilap[j]) * R * R);
    }

    if (c.max_over_r2 > 1e-10 || c.min_phi < -1e-10 || c.max_d2 > 2.0 + 1e-10)
        throw std::runtime_error("build_cutoff: bound verification failed");
    return c;
}

VirialSample virial_sample(const SystemSpec& spec, const Field& u, const CutoffFunction& cutoff) {
    if (!u.is_radial()) throw std::invalid_argument("virial_sample: radial fields only");
    const auto& g = *u.radial;
    const int l = spec.components();
    if (static_cast<int>(cutoff.phi.size()) != g.points)
        throw std::invalid_argument("virial_sample: cutoff built on a different grid");
    VirialSample out;

    // V = int phi sum (alpha_k^2/gamma_k) |u_k|^2
    double V = 0.0;
    for (int j = 0; j < g.points; ++j) {
        double dens = 0.0;
        for (int k = 0; k < l; ++k)
            dens += spec.alpha[k] * spec.alpha[k] / spec.gamma[k] * std::norm(u.comp[k][j]);
        V += g.quad_weight[j] * cutoff.phi[j] * dens;
    }
    out.V = g.surface * V;

    // R as the edge pairing Im sum_e a_e h (Du)_e (D[phi conj(u)])_e: exactly
    // the summation-by-parts image of Im <phi Lap u, u> in the grid metric,
    // so the semi-discrete V' identity holds without a spatial defect.
    double Rt = 0.0;
    std::vector<Complex> pu(g.points), du(g.points), dpu(g.points);
    for (int k = 0; k < l; ++k) {
        for (int j = 0; j < g.points; ++j) pu[j] = cutoff.phi[j] * std::conj(u.comp[k][j]);
        g.edge_derivative(std::span<const Complex>(u.comp[k]), std::span<Complex>(du));
        g.edge_derivative(std::span<const Complex>(pu), std::span<Complex>(dpu));
        double acc = 0.0;
        for (int e = 0; e < g.points; ++e)
            acc += g.edge_stiffness[e] * g.h * (du[e] * dpu[e]).imag();
        Rt += 2.0 * spec.alpha[k] * acc;
    }
    out.R = g.surface * Rt;

    // f-term: 4 int phi Im sum m_k |x|^{-b} f_k(u) conj(u_k), m_k = alpha_k/(2 gamma_k);
    // sampled with the same pointwise weight the nonlinear step uses, so the
    // semi-discrete V' identity holds exactly.
    auto wsing = g.singular_weight(spec.b);
    double ft = 0.0;
    std::vector<Complex> z(l);
    for (int j = 0; j < g.points; ++j) {
        if (cutoff.phi[j] == 0.0) continue;
        for (int k = 0; k < l; ++k) z[k] = u.comp[k][j];
        double s = 0.0;
        for (int k = 0; k < l; ++k) {
            double mk = 0.5 * spec.alpha[k] / spec.gamma[k];
            s += mk * (eval_monomials(spec.f[k], z) * std::conj(z[k])).imag();
        }
        ft += g.quad_weight[j] * wsing[j] * cutoff.phi[j] * s;
    }
    out.f_term = 4.0 * g.surface * ft;
    out.rhs = out.R - out.f_term;
    out.margin = -pohozaev_functional(spec, u).direct;
    return out;
}

double virial_consistency(const EvolutionTrace& trace) {
    std::vector<const TraceRow*> rows;
    for (const auto& r : trace.rows)
        if (r.virial) rows.push_back(&r);
    if (rows.size() < 3) throw std::invalid_argument("virial_consistency: need >= 3 samples");
    const double dt = rows[1]->t - rows[0]->t;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i]->t - rows[i - 1]->t - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("virial_consistency: samples not uniformly spaced");
    double defect = 0.0;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        double dv = (rows[i + 1]->virial->V - rows[i - 1]->virial->V) / (2.0 * dt);
        defect = std::max(defect, std::abs(dv - rows[i]->virial->rhs));
    }
    return defect;
}

double virial_consistency(const SystemSpec& spec, const std::vector<Field>& snapshots,
                          const std::vector<double>& times, const CutoffFunction& cutoff) {
    if (snapshots.size() < 3 || snapshots.size() != times.size())
        throw std::invalid_argument("virial_consistency: need >= 3 snapshots with times");
    EvolutionTrace trace;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        TraceRow row;
        row.t = times[i];
        row.virial = virial_sample(spec, snapshots[i], cutoff);
        trace.rows.push_back(std::move(row));
    }
    return virial_consistency(trace);
}

std::string Classification::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "verdict = " << to_string(verdict) << "\n";
    os << "s_c = " << s_c << "\n";
    os << "radial = " << (radial ? 1 : 0) << "\n";
    os << "energy_lhs = " << energy_lhs << "\n";
    os << "energy_rhs = " << energy_rhs << "\n";
    os << "energy_margin = " << energy_margin << "\n";
    os << "kinetic_lhs = " << kinetic_lhs << "\n";
    os << "kinetic_rhs = " << kinetic_rhs << "\n";
    os << "kinetic_margin = " << kinetic_margin << "\n";
    return os.str();
}

}  // namespace inls
