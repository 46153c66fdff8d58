#include "inls/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "inls/grid.hpp"
#include "inls/rng.hpp"

namespace inls {

namespace {

Complex ipow(Complex z, int p) {
    Complex r{1.0, 0.0};
    while (p > 0) {
        if (p & 1) r *= z;
        z *= z;
        p >>= 1;
    }
    return r;
}

// Collect like terms; drops terms with zero coefficient.
MonomialList collect(MonomialList terms) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> acc;
    for (auto& t : terms) acc[{t.zpow, t.cpow}] += t.coeff;
    MonomialList out;
    for (auto& [key, c] : acc) {
        if (std::abs(c) == 0.0) continue;
        out.push_back(Monomial{c, key.first, key.second});
    }
    return out;
}

}  // namespace

int Monomial::degree() const {
    int d = 0;
    for (int p : zpow) d += p;
    for (int p : cpow) d += p;
    return d;
}

Monomial Monomial::conjugated() const { return Monomial{std::conj(coeff), cpow, zpow}; }

void InteractionPotential::validate() const {
    if (components < 1) throw std::invalid_argument("potential: needs at least one component");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (static_cast<int>(t.zpow.size()) != components ||
            static_cast<int>(t.cpow.size()) != components) {
            std::ostringstream os;
            os << "potential: term " << i << " has power vectors of wrong length";
            throw std::invalid_argument(os.str());
        }
        for (int p : t.zpow)
            if (p < 0) throw std::invalid_argument("potential: negative power");
        for (int p : t.cpow)
            if (p < 0) throw std::invalid_argument("potential: negative power");
        if (t.degree() != 3) {
            std::ostringstream os;
            os << "potential: term " << i << " has degree " << t.degree() << ", expected 3";
            throw std::invalid_argument(os.str());
        }
    }
}

double InteractionPotential::coefficient_l1() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.coeff);
    return s;
}

Complex eval_monomials(const MonomialList& poly, std::span<const Complex> z) {
    Complex acc{0.0, 0.0};
    for (const auto& t : poly) {
        if (t.zpow.size() != z.size() || t.cpow.size() != z.size())
            throw std::invalid_argument("eval: argument length mismatch");
        Complex m = t.coeff;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (t.zpow[j]) m *= ipow(z[j], t.zpow[j]);
            if (t.cpow[j]) m *= ipow(std::conj(z[j]), t.cpow[j]);
        }
        acc += m;
    }
    return acc;
}

Complex eval_potential(const InteractionPotential& F, std::span<const Complex> z) {
    if (static_cast<int>(z.size()) != F.components)
        throw std::invalid_argument("eval_potential: argument length mismatch");
    return eval_monomials(F.terms, z);
}

MonomialList wirtinger_z(const MonomialList& poly, int k) {
    MonomialList out;
    for (const auto& t : poly) {
        if (t.zpow[k] == 0) continue;
        Monomial d = t;
        d.coeff *= static_cast<double>(t.zpow[k]);
        d.zpow[k] -= 1;
        out.push_back(std::move(d));
    }
    return collect(std::move(out));
}

MonomialList wirtinger_zbar(const MonomialList& poly, int k) {
    MonomialList out;
    for (const auto& t : poly) {
        if (t.cpow[k] == 0) continue;
        Monomial d = t;
        d.coeff *= static_cast<double>(t.cpow[k]);
        d.cpow[k] -= 1;
        out.push_back(std::move(d));
    }
    return collect(std::move(out));
}

std::vector<MonomialList> derive_nonlinearities(const InteractionPotential& F) {
    F.validate();
    std::vector<MonomialList> f(F.components);
    for (int k = 0; k < F.components; ++k) {
        MonomialList parts = wirtinger_zbar(F.terms, k);
        for (const auto& t : wirtinger_z(F.terms, k)) parts.push_back(t.conjugated());
        f[k] = collect(std::move(parts));
    }
    return f;
}

void SystemSpec::finalize() {
    potential.validate();
    const int l = potential.components;
    if (dim < 2 || dim > 5) throw std::invalid_argument("spec: dimension must be in 2..5");
    double bmax = std::min(2.0, dim / 2.0);
    // b = 0 is the nonsingular limit; kept admissible for reference runs.
    if (!(b >= 0.0 && b < bmax)) throw std::invalid_argument("spec: need 0 <= b < min(2, n/2)");
    auto need_len = [&](const std::vector<double>& v, const char* what) {
        if (static_cast<int>(v.size()) != l) {
            std::ostringstream os;
            os << "spec: " << what << " must have length " << l;
            throw std::invalid_argument(os.str());
        }
    };
    need_len(alpha, "alpha");
    need_len(gamma, "gamma");
    need_len(beta, "beta");
    need_len(sigma, "sigma");
    for (double a : alpha)
        if (!(a > 0)) throw std::invalid_argument("spec: alpha_k must be positive");
    for (double g : gamma)
        if (!(g > 0)) throw std::invalid_argument("spec: gamma_k must be positive");
    for (double be : beta)
        if (!(be >= 0)) throw std::invalid_argument("spec: beta_k must be non-negative");
    for (double s : sigma)
        if (!(s > 0)) throw std::invalid_argument("spec: sigma_k must be positive");
    for (const auto& part : supermodular_parts)
        for (const auto& t : part)
            if (static_cast<int>(t.zpow.size()) != l || static_cast<int>(t.cpow.size()) != l)
                throw std::invalid_argument("spec: supermodular part has wrong arity");
    f = derive_nonlinearities(potential);
}

std::vector<double> SystemSpec::zero_order_coefficients(double omega) const {
    std::vector<double> bk(components());
    for (int k = 0; k < components(); ++k) bk[k] = alpha[k] * sigma[k] * omega + beta[k];
    return bk;
}

double gauge_residual(const SystemSpec& spec, std::span<const Complex> z, double theta) {
    std::vector<Complex> zr(z.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        zr[k] = std::polar(1.0, spec.sigma[k] * theta) * z[k];
    double a = eval_potential(spec.potential, zr).real();
    double b0 = eval_potential(spec.potential, z).real();
    return std::abs(a - b0);
}

double charge_identity_residual(const SystemSpec& spec, std::span<const Complex> z) {
    Complex s{0.0, 0.0};
    for (int k = 0; k < spec.components(); ++k)
        s += spec.sigma[k] * eval_monomials(spec.f[k], z) * std::conj(z[k]);
    return std::abs(s.imag());
}

bool HypothesisReport::all_pass() const {
    for (const HypothesisItem* it : {&h1, &h2, &h3, &h4, &h5, &h6, &h7, &h8, &remark})
        if (it->checked && !it->pass) return false;
    return true;
}

std::string HypothesisReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    auto line = [&](const char* name, const HypothesisItem& it) {
        os << name << ".checked = " << (it.checked ? 1 : 0) << "\n";
        os << name << ".pass = " << (it.pass ? 1 : 0) << "\n";
        os << name << ".residual = " << it.residual << "\n";
        if (!it.witness.empty()) {
            os << name << ".witness =";
            for (auto w : it.witness) os << " " << w.real() << " " << w.imag();
            os << "\n";
        }
    };
    line("H1", h1);
    line("H2", h2);
    os << "H2.constant = " << h2_constant << "\n";
    line("H3", h3);
    line("H4", h4);
    line("H5", h5);
    line("H6", h6);
    line("H7", h7);
    line("H8", h8);
    line("remark_1_1", remark);
    os << "all_pass = " << (all_pass() ? 1 : 0) << "\n";
    return os.str();
}

namespace {

void observe(HypothesisItem& item, double residual, double tol, std::span<const Complex> sample) {
    if (residual > item.residual) item.residual = residual;
    if (residual > tol && item.pass) {
        item.pass = false;
        item.witness.assign(sample.begin(), sample.end());
    }
}

// Five-point stencil, exact for cubic polynomials: the truncation term is h^4 f^(5)/30.
Complex stencil5(const std::vector<Complex>& fm2, const std::vector<Complex>& fm1,
                 const std::vector<Complex>& fp1, const std::vector<Complex>& fp2,
                 std::size_t idx, double h) {
    return (fm2[idx] - fp2[idx] + 8.0 * (fp1[idx] - fm1[idx])) / (12.0 * h);
}

}  // namespace

HypothesisReport check_hypotheses(const SystemSpec& spec, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("check_hypotheses: sample_count >= 1");
    const int l = spec.components();
    const double tol_exact = 1e-12;
    HypothesisReport rep;
    Rng rng(seed);

    // H1: no constant term can survive the degree restriction, but evaluate anyway.
    {
        std::vector<Complex> zero(l, Complex{0.0, 0.0});
        double r = std::abs(eval_potential(spec.potential, zero));
        for (int k = 0; k < l; ++k) r = std::max(r, std::abs(eval_monomials(spec.f[k], zero)));
        observe(rep.h1, r, tol_exact, zero);
    }

    std::vector<Complex> z(l), z2(l), y(l);

    // Precompute Wirtinger derivatives of the f_k for the H2 ratio sampling.
    std::vector<std::vector<MonomialList>> df_z(l), df_zb(l);
    for (int k = 0; k < l; ++k) {
        df_z[k].resize(l);
        df_zb[k].resize(l);
        for (int m = 0; m < l; ++m) {
            df_z[k][m] = wirtinger_z(spec.f[k], m);
            df_zb[k][m] = wirtinger_zbar(spec.f[k], m);
        }
    }

    for (int s = 0; s < sample_count; ++s) {
        for (int k = 0; k < l; ++k) z[k] = rng.complex_in_box(1.5);
        for (int k = 0; k < l; ++k) z2[k] = rng.complex_in_box(1.5);

        // H2: sampled Lipschitz-type ratios of the z/zbar derivatives of f_k.
        {
            double dz = 0.0;
            for (int j = 0; j < l; ++j) dz += std::abs(z[j] - z2[j]);
            if (dz > 1e-9) {
                for (int k = 0; k < l; ++k)
                    for (int m = 0; m < l; ++m) {
                        double num =
                            std::abs(eval_monomials(df_z[k][m], z) - eval_monomials(df_z[k][m], z2));
                        num = std::max(num, std::abs(eval_monomials(df_zb[k][m], z) -
                                                     eval_monomials(df_zb[k][m], z2)));
                        rep.h2_constant = std::max(rep.h2_constant, num / dz);
                    }
                if (!std::isfinite(rep.h2_constant)) observe(rep.h2, rep.h2_constant, 1.0, z);
            }
        }

        // H3: symbolic f_k against a cubic-exact finite-difference derivative of F,
        // taken in the four real coordinates of (z_k, zbar_k).
        {
            const double h = 0.25;
            auto shifted = [&](int k, Complex delta) {
                std::vector<Complex> w(z.begin(), z.end());
                w[k] += delta;
                return w;
            };
            double fscale = 1.0;
            for (int j = 0; j < l; ++j) fscale += std::norm(z[j]);
            fscale *= std::max(1.0, spec.potential.coefficient_l1());
            for (int k = 0; k < l; ++k) {
                auto evalF = [&](Complex delta) {
                    auto w = shifted(k, delta);
                    return eval_potential(spec.potential, w);
                };
                std::vector<Complex> fm2{evalF({-2 * h, 0})}, fm1{evalF({-h, 0})},
                    fp1{evalF({h, 0})}, fp2{evalF({2 * h, 0})};
                Complex dFdx = stencil5(fm2, fm1, fp1, fp2, 0, h);
                fm2[0] = evalF({0, -2 * h});
                fm1[0] = evalF({0, -h});
                fp1[0] = evalF({0, h});
                fp2[0] = evalF({0, 2 * h});
                Complex dFdy = stencil5(fm2, fm1, fp1, fp2, 0, h);
                Complex dF_dzbar = 0.5 * (dFdx + Complex{0, 1} * dFdy);
                Complex dF_dz = 0.5 * (dFdx - Complex{0, 1} * dFdy);
                Complex f_fd = dF_dzbar + std::conj(dF_dz);
                double r = std::abs(eval_monomials(spec.f[k], z) - f_fd) / fscale;
                observe(rep.h3, r, tol_exact, z);
            }
        }

        // H4 along with the Remark identity.
        {
            double theta = rng.uniform(-8.0, 8.0);
            double scale = std::max(1.0, std::abs(eval_potential(spec.potential, z)));
            observe(rep.h4, gauge_residual(spec, z, theta) / scale, tol_exact, z);
            observe(rep.remark, charge_identity_residual(spec, z), 1e-13, z);
        }

        // H5: degree-3 homogeneity over lambda in (0, 10].
        {
            double lam = rng.uniform(0.0, 10.0);
            if (lam < 1e-3) lam = 1e-3;
            std::vector<Complex> zl(l);
            for (int k = 0; k < l; ++k) zl[k] = lam * z[k];
            Complex a = eval_potential(spec.potential, zl);
            Complex b0 = eval_potential(spec.potential, z);
            double lam3 = lam * lam * lam;
            double r = std::abs(a - lam3 * b0) / (lam3 * (1.0 + std::abs(b0)));
            observe(rep.h5, r, tol_exact, z);
        }

        // H7: real-valued on R^l, f_k non-negative on the positive cone.
        {
            for (int k = 0; k < l; ++k) y[k] = Complex{rng.uniform(0.0, 2.0), 0.0};
            double r = std::abs(eval_potential(spec.potential, y).imag());
            for (int k = 0; k < l; ++k) {
                Complex fk = eval_monomials(spec.f[k], y);
                r = std::max(r, std::abs(fk.imag()));
                r = std::max(r, std::max(0.0, -fk.real()));
            }
            observe(rep.h7, r, tol_exact, y);
        }

        // H8: supermodularity and hyperplane vanishing of each supplied part.
        if (!spec.supermodular_parts.empty()) {
            for (const auto& part : spec.supermodular_parts) {
                std::vector<int> active;
                for (int j = 0; j < l; ++j)
                    for (const auto& t : part)
                        if (t.zpow[j] + t.cpow[j] > 0) {
                            active.push_back(j);
                            break;
                        }
                if (active.size() < 1) continue;
                for (int j = 0; j < l; ++j) y[j] = Complex{0.0, 0.0};
                for (int j : active) y[j] = Complex{rng.uniform(0.0, 2.0), 0.0};
                double h = rng.uniform(0.0, 1.0) + 1e-3;
                double kk = rng.uniform(0.0, 1.0) + 1e-3;
                auto Fs = [&](const std::vector<Complex>& arg) {
                    return eval_monomials(part, arg).real();
                };
                for (std::size_t a = 0; a < active.size(); ++a)
                    for (std::size_t c = a + 1; c < active.size(); ++c) {
                        auto yhk = y, yh = y, yk = y;
                        yhk[active[a]] += h;
                        yhk[active[c]] += kk;
                        yh[active[a]] += h;
                        yk[active[c]] += kk;
                        double viol = Fs(yh) + Fs(yk) - Fs(yhk) - Fs(y);
                        observe(rep.h8, std::max(0.0, viol), tol_exact, y);
                    }
                for (std::size_t a = 0; a < active.size(); ++a) {
                    auto y0 = y;
                    y0[active[a]] = Complex{0.0, 0.0};
                    observe(rep.h8, std::abs(Fs(y0)), tol_exact, y0);
                }
            }
        }
    }
    if (spec.supermodular_parts.empty()) rep.h8.checked = false;

    // H6: |Re int w F(u)| <= int w F(|u|) on sampled smooth radial fields.
    {
        RadialGrid g(spec.dim, 257, 8.0);
        auto wq = g.weighted_quadrature(spec.b);
        const int fields = std::min(sample_count, 48);
        for (int s = 0; s < fields; ++s) {
            std::vector<std::vector<Complex>> u(l, std::vector<Complex>(g.points));
            for (int k = 0; k < l; ++k) {
                Complex a = rng.complex_in_box(1.0);
                Complex b2 = rng.complex_in_box(0.5);
                double c1 = rng.uniform(0.3, 2.0), c2 = rng.uniform(0.3, 2.0);
                for (int j = 0; j < g.points; ++j) {
                    double r = g.r[j];
                    u[k][j] = a * std::exp(-c1 * r * r) + b2 * r * std::exp(-c2 * r * r);
                }
            }
            double P = 0.0, Pabs = 0.0;
            std::vector<Complex> val(l), mag(l);
            for (int j = 0; j < g.points; ++j) {
                for (int k = 0; k < l; ++k) {
                    val[k] = u[k][j];
                    mag[k] = Complex{std::abs(u[k][j]), 0.0};
                }
                P += wq[j] * eval_potential(spec.potential, val).real();
                Pabs += wq[j] * eval_potential(spec.potential, mag).real();
            }
            double r = std::max(0.0, std::abs(P) - Pabs) / std::max(1.0, std::abs(Pabs));
            observe(rep.h6, r, tol_exact, {});
        }
    }

    return rep;
}

}  // namespace inls
