#include "inls/groundstate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "banded.hpp"

namespace inls {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::TrivialAttractor: return "trivial-attractor";
    }
    return "?";
}

GroundStateResult solve(const SystemSpec& spec, double omega,
                        std::shared_ptr<const RadialGrid> grid, const GroundStateOptions& opts) {
    if (opts.max_iterations < 1 || !(opts.tol > 0) || !(opts.stabilizer_tol > 0))
        throw std::invalid_argument("groundstate: bad options");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("groundstate: damping must be in (0, 1]");
    const auto& g = *grid;
    const int N = g.points;
    const int l = spec.components();

    auto bk = spec.zero_order_coefficients(omega);
    for (int k = 0; k < l; ++k)
        if (!(bk[k] > 0)) {
            std::ostringstream os;
            os << "groundstate: b_" << k << " = " << bk[k] << " <= 0, restrict omega";
            throw std::invalid_argument(os.str());
        }

    // Operator-fitted pointwise image of r^{-b}; the same weight drives the
    // evolution, so converged profiles are exact standing states of the
    // semi-discrete flow.
    auto what = g.singular_weight(spec.b);

    std::vector<BandedRows> rows;
    std::vector<detail::BandedLU<double>> lu(l);
    rows.reserve(l);
    for (int k = 0; k < l; ++k) {
        rows.push_back(operator_rows(g, spec.gamma[k], bk[k]));
        lu[k].factor_from(rows[k]);
    }

    std::vector<std::vector<double>> psi(l, std::vector<double>(N));
    for (int k = 0; k < l; ++k) {
        double amp = k < static_cast<int>(opts.init_amplitude.size()) ? opts.init_amplitude[k] : 1.0;
        double width = k < static_cast<int>(opts.init_width.size()) ? opts.init_width[k] : 1.0;
        for (int j = 0; j < N; ++j) psi[k][j] = amp * std::exp(-(g.r[j] / width) * (g.r[j] / width));
    }

    GroundStateResult res;
    res.omega = omega;
    res.bk = bk;
    res.pde_residual.assign(l, 0.0);

    std::vector<std::vector<double>> rhs(l, std::vector<double>(N)), Lpsi(l, std::vector<double>(N));
    std::vector<Complex> znode(l);

    auto eval_rhs = [&](const std::vector<std::vector<double>>& p, std::vector<std::vector<double>>& out) {
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < l; ++k) znode[k] = Complex{p[k][j], 0.0};
            for (int k = 0; k < l; ++k) out[k][j] = what[j] * eval_monomials(spec.f[k], znode).real();
        }
    };

    double S = 0.0;
    eval_rhs(psi, rhs);
    for (int m = 1; m <= opts.max_iterations; ++m) {
        // global stabilizing factor from the action pairing
        double num = 0.0, den = 0.0, amax = 0.0;
        for (int k = 0; k < l; ++k) {
            detail::banded_apply(rows[k], psi[k], Lpsi[k]);
            for (int j = 0; j < N; ++j) {
                num += g.quad_weight[j] * Lpsi[k][j] * psi[k][j];
                den += g.quad_weight[j] * rhs[k][j] * psi[k][j];
                amax = std::max(amax, std::abs(psi[k][j]));
            }
        }
        if (amax < 1e-12 || std::abs(den) < 1e-290) {
            res.status = SolveStatus::TrivialAttractor;
            res.iterations = m;
            break;
        }
        S = num / den;
        res.stabilizer_gap = std::abs(S - 1.0);

        for (int k = 0; k < l; ++k) {
            std::vector<double> sol = rhs[k];
            lu[k].solve(sol);
            double d = opts.damping;
            for (int j = 0; j < N; ++j) psi[k][j] = (1.0 - d) * psi[k][j] + d * S * S * sol[j];
        }

        eval_rhs(psi, rhs);
        double worst = 0.0;
        for (int k = 0; k < l; ++k) {
            detail::banded_apply(rows[k], psi[k], Lpsi[k]);
            double acc = 0.0;
            for (int j = 0; j < N; ++j) {
                double d = Lpsi[k][j] - rhs[k][j];
                acc += g.quad_weight[j] * d * d;
            }
            res.pde_residual[k] = std::sqrt(g.surface * acc);
            worst = std::max(worst, res.pde_residual[k]);
        }
        res.residual_history.push_back(worst);
        res.iterations = m;
        if (worst <= opts.tol && res.stabilizer_gap <= opts.stabilizer_tol) {
            res.status = SolveStatus::Converged;
            break;
        }
    }

    res.psi = Field::zeros(grid, l);
    for (int k = 0; k < l; ++k)
        for (int j = 0; j < N; ++j) res.psi.comp[k][j] = Complex{psi[k][j], 0.0};
    res.functionals = report(spec, res.psi, omega);
    res.pohozaev = pohozaev_residuals(spec, res.psi, omega);
    return res;
}

Certification certify(const SystemSpec& spec, const GroundStateResult& gs,
                      const GroundStateOptions& opts) {
    Certification c;
    c.residual_ok = gs.converged();
    for (double r : gs.pde_residual) c.residual_ok = c.residual_ok && r <= 10.0 * opts.tol;
    c.pohozaev_ok = gs.pohozaev[0] <= 1e-3 && gs.pohozaev[1] <= 1e-3 && gs.pohozaev[2] <= 1e-3;

    c.min_value = 0.0;
    c.max_increase = 0.0;
    for (const auto& comp : gs.psi.comp) {
        for (std::size_t j = 0; j < comp.size(); ++j) {
            c.min_value = std::min(c.min_value, comp[j].real());
            if (j + 1 < comp.size())
                c.max_increase = std::max(c.max_increase, comp[j + 1].real() - comp[j].real());
        }
    }
    c.positivity_ok = c.min_value >= -1e-10;
    c.monotonicity_ok = c.max_increase <= 1e-8;

    c.xi1_gap_ok = false;
    if (spec.dim + 2.0 * spec.b < 6.0 && gs.functionals.P != 0.0) {
        c.thresholds = thresholds_from_groundstate(spec, gs);
        c.xi1_gap_ok = c.thresholds.xi1_gap_rel <= 1e-4;
    }
    c.pass = gs.converged() && c.residual_ok && c.pohozaev_ok && c.positivity_ok &&
             c.monotonicity_ok && c.xi1_gap_ok;
    return c;
}

std::vector<OmegaSweepRow> omega_sweep(const SystemSpec& spec, const std::vector<double>& omegas,
                                       std::shared_ptr<const RadialGrid> grid,
                                       const GroundStateOptions& opts) {
    std::vector<OmegaSweepRow> rows;
    rows.reserve(omegas.size());
    for (double w : omegas) {
        auto gs = solve(spec, w, grid, opts);
        OmegaSweepRow row;
        row.omega = w;
        row.status = gs.status;
        row.iterations = gs.iterations;
        if (gs.converged()) {
            row.Qcal = *gs.functionals.Qcal;
            row.xi1 = thresholds_from_groundstate(spec, gs).xi1_closed;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace inls
