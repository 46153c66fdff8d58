#include "inls/presets.hpp"

#include <stdexcept>

namespace inls {

namespace {

Monomial mono(Complex c, std::vector<int> zp, std::vector<int> cp) {
    return Monomial{c, std::move(zp), std::move(cp)};
}

// Built-in supermodular decompositions: one part per monomial, each a single
// monomial restricted to the positive real cone.
std::vector<MonomialList> singleton_parts(const InteractionPotential& F) {
    std::vector<MonomialList> parts;
    for (const auto& t : F.terms) parts.push_back(MonomialList{t});
    return parts;
}

double param(const std::map<std::string, double>& params, const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

}  // namespace

SystemSpec two_wave(int n, double b, double kappa, double gtilde) {
    SystemSpec s;
    s.name = "two_wave";
    s.dim = n;
    s.b = b;
    s.alpha = {2.0, 2.0};
    s.gamma = {1.0, kappa};
    s.beta = {0.0, 2.0 * gtilde};
    s.sigma = {1.0, 2.0};
    s.potential.components = 2;
    s.potential.terms = {mono({1.0, 0.0}, {0, 1}, {2, 0})};  // conj(z1)^2 z2
    s.supermodular_parts = singleton_parts(s.potential);
    s.finalize();
    return s;
}

SystemSpec three_wave_a(int n, double b, double beta_t, double beta_t1) {
    SystemSpec s;
    s.name = "three_wave_a";
    s.dim = n;
    s.b = b;
    s.alpha = {2.0, 1.0, 1.0};
    s.gamma = {1.0, 1.0, 1.0};
    s.beta = {beta_t, beta_t1, 1.0};
    s.sigma = {2.0, 1.0, 1.0};
    s.potential.components = 3;
    s.potential.terms = {mono({0.5, 0.0}, {0, 2, 0}, {1, 0, 0}),   // conj(z1) z2^2 / 2
                         mono({0.5, 0.0}, {0, 0, 2}, {1, 0, 0})};  // conj(z1) z3^2 / 2
    s.supermodular_parts = singleton_parts(s.potential);
    s.finalize();
    return s;
}

SystemSpec three_wave_b(int n, double b, double beta_t, double beta_t1) {
    SystemSpec s;
    s.name = "three_wave_b";
    s.dim = n;
    s.b = b;
    s.alpha = {1.0, 2.0, 3.0};
    s.gamma = {1.0, 1.0, 1.0};
    s.beta = {1.0, beta_t, beta_t1};
    s.sigma = {1.0, 2.0, 3.0};
    s.potential.components = 3;
    s.potential.terms = {mono({0.5, 0.0}, {2, 0, 0}, {0, 1, 0}),   // z1^2 conj(z2) / 2
                         mono({1.0, 0.0}, {1, 1, 0}, {0, 0, 1})};  // z1 z2 conj(z3)
    s.supermodular_parts = singleton_parts(s.potential);
    s.finalize();
    return s;
}

SystemSpec single_quadratic(int n, double b) {
    SystemSpec s;
    s.name = "single_quadratic";
    s.dim = n;
    s.b = b;
    s.alpha = {1.0};
    s.gamma = {1.0};
    s.beta = {0.0};
    s.sigma = {1.0};
    s.potential.components = 1;
    s.potential.terms = {mono({1.0 / 3.0, 0.0}, {2}, {1})};  // z^2 conj(z)/3, f = psi^2 on reals
    s.supermodular_parts = singleton_parts(s.potential);
    s.finalize();
    return s;
}

SystemSpec make_preset(const std::string& name, int n, double b,
                       const std::map<std::string, double>& params) {
    if (name == "two_wave")
        return two_wave(n, b, param(params, "kappa", 1.0), param(params, "gtilde", 0.0));
    if (name == "three_wave_a")
        return three_wave_a(n, b, param(params, "beta_t", 1.0), param(params, "beta_t1", 1.0));
    if (name == "three_wave_b")
        return three_wave_b(n, b, param(params, "beta_t", 1.0), param(params, "beta_t1", 1.0));
    if (name == "single_quadratic") return single_quadratic(n, b);
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace inls
