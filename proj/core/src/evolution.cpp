#include "inls/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "banded.hpp"
#include "inls/cartesian.hpp"
#include "inls/functionals.hpp"
#include "inls/snapshot.hpp"

namespace inls {

namespace {

// Crank-Nicolson pair for one component: A u+ = B u with
// A = I + i theta H, B = I - i theta H, H = -gamma Lap + beta, theta = tau/(2 alpha).
// H is self-adjoint in the grid metric, so each half step is unitary there.
struct CnOperator {
    BandedRows rows;  // H
    Complex itheta;
    detail::BandedLU<Complex> lu;
};

CnOperator cn_operator(const RadialGrid& g, double gamma, double beta, double alpha, double tau) {
    CnOperator op;
    op.rows = operator_rows(g, gamma, beta);
    op.itheta = Complex{0.0, 0.5 * tau / alpha};
    op.lu.factor_shifted(op.rows, op.itheta, Complex{1.0, 0.0});
    return op;
}

void cn_apply(CnOperator& op, std::vector<Complex>& u, std::vector<Complex>& rhs) {
    detail::banded_apply_shifted(op.rows, -op.itheta, Complex{1.0, 0.0}, u, rhs);
    op.lu.solve(rhs);
    u.swap(rhs);
}

// RK4 on the pointwise system du_k/dt = (i/alpha_k) w f_k(u).
// The degree-2 terms of f_k are compiled into pairs of linear factors so the
// per-node stage cost stays a handful of complex multiplies.
struct NodeFlow {
    struct FlatTerm {
        Complex coeff;
        int var1, var2;
        bool conj1, conj2;
    };
    int l;
    std::vector<double> inv_alpha;
    std::vector<std::vector<FlatTerm>> terms;  // per component
    std::vector<Complex> y, k1, k2, k3, k4, tmp;

    explicit NodeFlow(const SystemSpec& s)
        : l(s.components()), y(l), k1(l), k2(l), k3(l), k4(l), tmp(l) {
        inv_alpha.resize(l);
        terms.resize(l);
        for (int k = 0; k < l; ++k) {
            inv_alpha[k] = 1.0 / s.alpha[k];
            for (const auto& m : s.f[k]) {
                if (m.degree() != 2) throw std::logic_error("nonlinearity term is not degree 2");
                FlatTerm ft{m.coeff, -1, -1, false, false};
                for (int j = 0; j < l; ++j) {
                    for (int p = 0; p < m.zpow[j]; ++p) {
                        (ft.var1 < 0 ? ft.var1 : ft.var2) = j;
                    }
                    for (int p = 0; p < m.cpow[j]; ++p) {
                        if (ft.var1 < 0) {
                            ft.var1 = j;
                            ft.conj1 = true;
                        } else {
                            ft.var2 = j;
                            ft.conj2 = true;
                        }
                    }
                }
                terms[k].push_back(ft);
            }
        }
    }

    void rate(const std::vector<Complex>& state, double w, std::vector<Complex>& out) {
        for (int k = 0; k < l; ++k) {
            Complex acc{0.0, 0.0};
            for (const auto& t : terms[k]) {
                Complex a = state[t.var1];
                if (t.conj1) a = std::conj(a);
                Complex b = state[t.var2];
                if (t.conj2) b = std::conj(b);
                acc += t.coeff * a * b;
            }
            acc *= w * inv_alpha[k];
            out[k] = Complex{-acc.imag(), acc.real()};  // multiply by i
        }
    }

    void advance(std::vector<Complex>& state, double w, double dt, int substeps) {
        double hsub = dt / substeps;
        for (int s = 0; s < substeps; ++s) {
            rate(state, w, k1);
            for (int k = 0; k < l; ++k) tmp[k] = state[k] + 0.5 * hsub * k1[k];
            rate(tmp, w, k2);
            for (int k = 0; k < l; ++k) tmp[k] = state[k] + 0.5 * hsub * k2[k];
            rate(tmp, w, k3);
            for (int k = 0; k < l; ++k) tmp[k] = state[k] + hsub * k3[k];
            rate(tmp, w, k4);
            for (int k = 0; k < l; ++k)
                state[k] += hsub / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
    }
};

void nonlinear_inplace(NodeFlow& flow, Field& state, const std::vector<double>& w, double dt,
                       int substeps) {
    const int l = flow.l;
    const std::size_t N = state.samples();
    for (std::size_t j = 0; j < N; ++j) {
        bool all_zero = true;
        for (int k = 0; k < l; ++k) {
            flow.y[k] = state.comp[k][j];
            all_zero = all_zero && flow.y[k] == Complex{0.0, 0.0};
        }
        if (all_zero) continue;  // f(0) = 0: exact zeros stay exact
        flow.advance(flow.y, w[j], dt, substeps);
        for (int k = 0; k < l; ++k) state.comp[k][j] = flow.y[k];
    }
}

// Precomputed per-run machinery for one backend.
struct Stepper {
    const SystemSpec& spec;
    Field state;
    std::vector<double> w;  // pointwise singular weight
    int substeps;
    NodeFlow flow;
    // radial
    std::vector<CnOperator> cn;
    std::vector<Complex> rhs;
    // cartesian
    std::vector<std::vector<Complex>> phase;  // per component multiplier for half step
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<Complex> fft_buf;

    Stepper(const SystemSpec& s, const Field& u0, double dt, int sub)
        : spec(s), state(u0), substeps(sub), flow(s) {
        if (state.is_radial()) {
            const auto& g = *state.radial;
            w = g.singular_weight(spec.b);
            for (int k = 0; k < spec.components(); ++k)
                cn.push_back(cn_operator(g, spec.gamma[k], spec.beta[k], spec.alpha[k], 0.5 * dt));
        } else {
            const auto& g = *state.cartesian;
            w = g.singular_weight(spec.b);
            phase.resize(spec.components());
            for (int k = 0; k < spec.components(); ++k) {
                phase[k].resize(g.total());
                for (std::size_t i = 0; i < g.total(); ++i) {
                    auto iv = g.unflatten(i);
                    double k2 = 0.0;
                    for (int d = 0; d < g.dim; ++d) k2 += g.wavenumber[iv[d]] * g.wavenumber[iv[d]];
                    double ph = -(0.5 * dt / spec.alpha[k]) * (spec.gamma[k] * k2 + spec.beta[k]);
                    phase[k][i] = std::polar(1.0, ph);
                }
            }
            fft_buf.resize(g.total());
            std::vector<int> dims(g.dim, g.points_per_axis);
            fwd = fftw_plan_dft(g.dim, dims.data(), reinterpret_cast<fftw_complex*>(fft_buf.data()),
                                reinterpret_cast<fftw_complex*>(fft_buf.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
            bwd = fftw_plan_dft(g.dim, dims.data(), reinterpret_cast<fftw_complex*>(fft_buf.data()),
                                reinterpret_cast<fftw_complex*>(fft_buf.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
        }
    }
    ~Stepper() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }

    void linear_half() {
        if (state.is_radial()) {
            for (int k = 0; k < spec.components(); ++k) cn_apply(cn[k], state.comp[k], rhs);
        } else {
            const double norm = 1.0 / static_cast<double>(state.cartesian->total());
            for (int k = 0; k < spec.components(); ++k) {
                fft_buf = state.comp[k];
                fftw_execute(fwd);
                for (std::size_t i = 0; i < fft_buf.size(); ++i) fft_buf[i] *= phase[k][i];
                fftw_execute(bwd);
                for (std::size_t i = 0; i < fft_buf.size(); ++i) state.comp[k][i] = fft_buf[i] * norm;
            }
        }
    }

    void strang(double dt) {
        linear_half();
        nonlinear_inplace(flow, state, w, dt, substeps);
        linear_half();
    }
};

// One nearest-neighbor smoothing pass; the surviving fine-scale fraction of
// the gradient energy signals resolution loss.
double gradient_tail(const SystemSpec& spec, const Field& u) {
    if (!u.is_radial()) return 0.0;
    const auto& g = *u.radial;
    double total = 0.0, smooth = 0.0;
    std::vector<Complex> s(g.points);
    for (int k = 0; k < u.components(); ++k) {
        const auto& c = u.comp[k];
        for (int j = 0; j < g.points; ++j) {
            Complex lo = (j > 0) ? c[j - 1] : c[1];  // even reflection at r = 0
            Complex hi = (j + 1 < g.points) ? c[j + 1] : Complex{0.0, 0.0};
            s[j] = 0.25 * lo + 0.5 * c[j] + 0.25 * hi;
        }
        total += spec.gamma[k] * dirichlet_form(g, std::span<const Complex>(c), std::span<const Complex>(c));
        smooth += spec.gamma[k] * dirichlet_form(g, std::span<const Complex>(s), std::span<const Complex>(s));
    }
    if (total <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - smooth / total);
}

}  // namespace

Field linear_half_step(const SystemSpec& spec, const Field& state, double dt) {
    Stepper st(spec, state, dt, 1);
    st.linear_half();
    return st.state;
}

Field nonlinear_step(const SystemSpec& spec, const Field& state, double dt, int substeps) {
    Field out = state;
    std::vector<double> w;
    if (state.is_radial()) {
        w = state.radial->singular_weight(spec.b);
    } else {
        w = state.cartesian->singular_weight(spec.b);
    }
    NodeFlow flow(spec);
    nonlinear_inplace(flow, out, w, dt, substeps);
    return out;
}

EvolutionTrace evolve(const SystemSpec& spec, const Field& u0, const EvolveOptions& opts) {
    if (!(opts.dt > 0) || !(opts.T > 0)) throw std::invalid_argument("evolve: need dt > 0 and T > 0");
    if (opts.monitor_stride < 1 || opts.nonlinear_substeps < 1)
        throw std::invalid_argument("evolve: bad strides");
    if (u0.components() != spec.components())
        throw std::invalid_argument("evolve: component count mismatch");

    EvolutionTrace trace;
    trace.dt = opts.dt;
    trace.monitor_stride = opts.monitor_stride;
    const long long nsteps = static_cast<long long>(std::ceil(opts.T / opts.dt - 1e-12));

    Stepper st(spec, u0, opts.dt, opts.nonlinear_substeps);
    double k0 = 0.0;
    int snapshot_counter = 0;

    auto monitor = [&](double t) -> bool {
        auto rep = report(spec, st.state, std::nullopt);
        auto norms = h1_report(st.state);
        TraceRow row;
        row.t = t;
        row.Q = rep.Q;
        row.E = rep.E;
        row.K = rep.K;
        row.L = rep.L;
        row.P = rep.P;
        row.grad = norms.grad;
        row.grad_tail = gradient_tail(spec, st.state);
        if (opts.virial_sampler) row.virial = opts.virial_sampler(st.state, t);
        trace.rows.push_back(std::move(row));

        if (opts.snapshot_stride > 0 && !opts.snapshot_dir.empty() &&
            (static_cast<int>(trace.rows.size()) - 1) % opts.snapshot_stride == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "/field_%06d.inls", snapshot_counter++);
            write_snapshot(opts.snapshot_dir + name, st.state);
        }

        const auto& r = trace.rows.back();
        if (trace.rows.size() == 1) k0 = r.K;
        if (!std::isfinite(r.Q) || !std::isfinite(r.K) || !std::isfinite(r.E)) {
            trace.flag = {true, t, "overflow"};
        } else if (r.K > opts.kmax_multiplier * k0 && k0 > 0.0) {
            trace.flag = {true, t, "kinetic-threshold"};
        } else if (r.grad_tail > opts.tail_fraction) {
            trace.flag = {true, t, "resolution-loss"};
        }
        return trace.flag.fired;
    };

    if (monitor(0.0)) {
        trace.final_state = st.state;
        return trace;
    }
    for (long long step = 1; step <= nsteps; ++step) {
        st.strang(opts.dt);
        if (step % opts.monitor_stride == 0 || step == nsteps) {
            if (monitor(step * opts.dt)) break;
        }
    }
    trace.final_state = st.state;
    return trace;
}

double scaling_check(const SystemSpec& spec, const Field& u0, double lambda, double T, double dt) {
    for (double be : spec.beta)
        if (be != 0.0) throw std::invalid_argument("scaling_check: requires beta = 0");
    if (!(lambda > 0)) throw std::invalid_argument("scaling_check: lambda > 0");
    const double scale = std::pow(lambda, 2.0 - spec.b);
    const long long nsteps = static_cast<long long>(std::llround(T / dt));
    if (nsteps < 1) throw std::invalid_argument("scaling_check: T/dt too small");
    // Step counts must correspond exactly under t -> lambda^2 t.
    const double l2 = lambda * lambda;
    if (std::abs(l2 - std::llround(l2)) > 1e-12)
        throw std::invalid_argument("scaling_check: lambda^2 must be an integer step multiple");

    // reference run to time lambda^2 T
    Stepper ref(spec, u0, dt, 1);
    for (long long s = 0; s < nsteps * std::llround(l2); ++s) ref.strang(dt);

    // pre-scaled data on the contracted grid, nodal resample is exact
    Field v0;
    if (u0.is_radial()) {
        auto g2 = std::make_shared<RadialGrid>(u0.radial->dim, u0.radial->points, u0.radial->r_max / lambda);
        v0 = Field::zeros(g2, u0.components());
    } else {
        auto g2 = std::make_shared<CartesianGrid>(u0.cartesian->dim, u0.cartesian->points_per_axis,
                                                  u0.cartesian->extent / lambda);
        v0 = Field::zeros(g2, u0.components());
    }
    for (int k = 0; k < u0.components(); ++k)
        for (std::size_t j = 0; j < u0.samples(); ++j) v0.comp[k][j] = scale * u0.comp[k][j];

    // the rescaled run uses the parabolically matched step dt/lambda^2, so it
    // needs lambda^2 times as many steps to reach the same final time T
    Stepper run(spec, v0, dt / l2, 1);
    for (long long s = 0; s < nsteps * std::llround(l2); ++s) run.strang(dt / l2);

    double sup = 0.0;
    for (int k = 0; k < u0.components(); ++k)
        for (std::size_t j = 0; j < u0.samples(); ++j)
            sup = std::max(sup, std::abs(run.state.comp[k][j] - scale * ref.state.comp[k][j]));
    return sup;
}

BlowupFlag detect_blowup(const EvolutionTrace& trace, const EvolveOptions& opts) {
    if (trace.rows.empty()) throw std::invalid_argument("detect_blowup: empty trace");
    const double k0 = trace.rows.front().K;
    for (const auto& r : trace.rows) {
        if (!std::isfinite(r.Q) || !std::isfinite(r.K) || !std::isfinite(r.E))
            return {true, r.t, "overflow"};
        if (k0 > 0.0 && r.K > opts.kmax_multiplier * k0) return {true, r.t, "kinetic-threshold"};
        if (r.grad_tail > opts.tail_fraction) return {true, r.t, "resolution-loss"};
    }
    return {};
}

std::string EvolutionTrace::to_csv() const {
    std::ostringstream os;
    const int l = rows.empty() ? 0 : static_cast<int>(rows.front().grad.size());
    const bool virial = !rows.empty() && rows.front().virial.has_value();
    os << "t,Q,E,K,L,P";
    for (int k = 0; k < l; ++k) os << ",gradnorm_" << (k + 1);
    os << ",grad_tail";
    if (virial) os << ",V,R,virial_rhs,Tn_margin";
    os << ",flagged\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& r : rows) {
        num(r.t);
        os << ",";
        num(r.Q);
        os << ",";
        num(r.E);
        os << ",";
        num(r.K);
        os << ",";
        num(r.L);
        os << ",";
        num(r.P);
        for (int k = 0; k < l; ++k) {
            os << ",";
            num(r.grad[k]);
        }
        os << ",";
        num(r.grad_tail);
        if (virial && r.virial) {
            os << ",";
            num(r.virial->V);
            os << ",";
            num(r.virial->R);
            os << ",";
            num(r.virial->rhs);
            os << ",";
            num(r.virial->margin);
        } else if (virial) {
            os << ",,,,";
        }
        os << "," << (flag.fired && r.t >= flag.time ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace inls
