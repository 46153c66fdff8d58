#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inls/interaction.hpp"
#include "inls/presets.hpp"
#include "inls/rng.hpp"

using namespace inls;

namespace {

std::vector<Complex> vec(std::initializer_list<Complex> zs) { return {zs}; }

Complex eval_f(const SystemSpec& spec, int k, const std::vector<Complex>& z) {
    return eval_monomials(spec.f[k], z);
}

}  // namespace

TEST_CASE("wirtinger derivation of the two-wave nonlinearities") {
    auto spec = two_wave(3, 0.5);
    // F = conj(z1)^2 z2  =>  f1 = 2 conj(z1) z2 (factor 2 from the zbar power), f2 = z1^2
    REQUIRE(spec.f[0].size() == 1);
    CHECK(spec.f[0][0].coeff == Complex{2.0, 0.0});
    CHECK(spec.f[0][0].zpow == std::vector<int>{0, 1});
    CHECK(spec.f[0][0].cpow == std::vector<int>{1, 0});
    REQUIRE(spec.f[1].size() == 1);
    CHECK(spec.f[1][0].coeff == Complex{1.0, 0.0});
    CHECK(spec.f[1][0].zpow == std::vector<int>{2, 0});
    CHECK(spec.f[1][0].cpow == std::vector<int>{0, 0});
}

TEST_CASE("zero potential derives zero nonlinearities") {
    InteractionPotential F;
    F.components = 2;
    auto f = derive_nonlinearities(F);
    REQUIRE(f.size() == 2);
    CHECK(f[0].empty());
    CHECK(f[1].empty());
}

TEST_CASE("three-wave cascade nonlinearities match the hand derivation") {
    auto spec = three_wave_a(3, 0.5);
    Rng rng(7);
    for (int s = 0; s < 50; ++s) {
        std::vector<Complex> z{rng.complex_in_box(2), rng.complex_in_box(2), rng.complex_in_box(2)};
        Complex f1 = 0.5 * (z[1] * z[1] + z[2] * z[2]);
        Complex f2 = z[0] * std::conj(z[1]);
        Complex f3 = z[0] * std::conj(z[2]);
        CHECK(std::abs(eval_f(spec, 0, z) - f1) < 1e-14);
        CHECK(std::abs(eval_f(spec, 1, z) - f2) < 1e-14);
        CHECK(std::abs(eval_f(spec, 2, z) - f3) < 1e-14);
    }
}

TEST_CASE("potential evaluation") {
    auto spec = two_wave(3, 0.5);
    const auto& F = spec.potential;
    CHECK(eval_potential(F, vec({{1, 0}, {1, 0}})) == Complex{1.0, 0.0});
    CHECK(std::abs(eval_potential(F, vec({{0, 1}, {1, 0}})) - Complex{-1.0, 0.0}) < 1e-15);
    CHECK(eval_potential(F, vec({{0, 0}, {0, 0}})) == Complex{0.0, 0.0});
    CHECK_THROWS_AS((void)eval_potential(F, vec({{1, 0}})), std::invalid_argument);
}

TEST_CASE("nonlinearity evaluation") {
    auto spec = two_wave(3, 0.5);
    CHECK(eval_f(spec, 1, vec({{2, 0}, {5, 0}})) == Complex{4.0, 0.0});
    CHECK(std::abs(eval_f(spec, 0, vec({{1, 1}, {1, 0}})) - Complex{2.0, -2.0}) < 1e-15);
    CHECK(eval_f(spec, 0, vec({{0, 0}, {0, 0}})) == Complex{0.0, 0.0});
}

TEST_CASE("malformed degree is rejected with the term index") {
    InteractionPotential F;
    F.components = 1;
    F.terms = {Monomial{{1.0, 0.0}, {1}, {1}}};  // degree 2
    try {
        F.validate();
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("term 0") != std::string::npos);
    }
}

TEST_CASE("gauge residual") {
    auto spec = two_wave(3, 0.5);
    Rng rng(11);
    std::vector<Complex> z{rng.complex_in_box(1.5), rng.complex_in_box(1.5)};
    CHECK(gauge_residual(spec, z, 0.7) <= 1e-14);
    CHECK(gauge_residual(spec, z, 0.0) == 0.0);

    auto wrong = spec;
    wrong.sigma = {1.0, 1.0};
    wrong.finalize();
    std::vector<Complex> ones{{1, 0}, {1, 0}};
    // Re F(e^{-i pi/2}) - Re F = cos(pi/2) - 1 = -1
    CHECK(gauge_residual(wrong, ones, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("charge identity residual (Remark on (H3)-(H4))") {
    auto spec = two_wave(3, 0.5);
    std::vector<Complex> zero{{0, 0}, {0, 0}};
    CHECK(charge_identity_residual(spec, zero) == 0.0);
    std::vector<Complex> z{{1, 1}, {2, -1}};
    CHECK(charge_identity_residual(spec, z) <= 1e-14);

    auto wrong = spec;
    wrong.sigma = {1.0, 1.0};
    wrong.finalize();
    std::vector<Complex> zi{{1, 0}, {0, 1}};
    CHECK(charge_identity_residual(wrong, zi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("charge identity cancels algebraically on all built-ins") {
    Rng rng(13);
    for (auto spec : {two_wave(3, 0.5), three_wave_a(3, 0.5), three_wave_b(3, 0.5)}) {
        double worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            std::vector<Complex> z(spec.components());
            for (auto& c : z) c = rng.complex_in_box(1.5);
            worst = std::max(worst, charge_identity_residual(spec, z));
        }
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("homogeneity of degree 3") {
    Rng rng(17);
    for (auto spec : {two_wave(3, 0.5), three_wave_b(3, 0.5)}) {
        for (int s = 0; s < 200; ++s) {
            std::vector<Complex> z(spec.components());
            for (auto& c : z) c = rng.complex_in_box(1.5);
            double lam = rng.uniform(1e-3, 10.0);
            std::vector<Complex> zl(z);
            for (auto& c : zl) c *= lam;
            Complex a = eval_potential(spec.potential, zl);
            Complex b = eval_potential(spec.potential, z);
            double lam3 = lam * lam * lam;
            CHECK(std::abs(a - lam3 * b) <= 1e-12 * lam3 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("derived nonlinearities are degree 2 with the coefficient bound") {
    Rng rng(19);
    for (auto spec : {two_wave(3, 0.5), three_wave_a(3, 0.5), three_wave_b(3, 0.5)}) {
        double coeff_sum = 0.0;
        for (const auto& fk : spec.f)
            for (const auto& t : fk) {
                CHECK(t.degree() == 2);
                coeff_sum = std::max(coeff_sum, std::abs(t.coeff));
            }
        double C = 0.0;
        for (const auto& fk : spec.f) {
            double s = 0.0;
            for (const auto& t : fk) s += std::abs(t.coeff);
            C = std::max(C, s);
        }
        for (int s = 0; s < 200; ++s) {
            std::vector<Complex> z(spec.components());
            double sum2 = 0.0;
            for (auto& c : z) {
                c = rng.complex_in_box(2.0);
                sum2 += std::norm(c);
            }
            for (int k = 0; k < spec.components(); ++k)
                CHECK(std::abs(eval_f(spec, k, z)) <= C * sum2 * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("real cone: f_k real and non-negative") {
    Rng rng(23);
    for (auto spec : {two_wave(3, 0.5), three_wave_a(3, 0.5), three_wave_b(3, 0.5)}) {
        for (int s = 0; s < 200; ++s) {
            std::vector<Complex> y(spec.components());
            for (auto& c : y) c = Complex{rng.uniform(0, 2), 0.0};
            for (int k = 0; k < spec.components(); ++k) {
                Complex v = eval_f(spec, k, y);
                CHECK(std::abs(v.imag()) == 0.0);
                CHECK(v.real() >= -1e-14);
            }
        }
    }
}

TEST_CASE("wirtinger consistency by central differences") {
    // |f_k - [dF/dzbar_k + conj(dF/dz_k)]| <= 1e-10 with step 1e-5 in the
    // four real coordinates of (z_k, zbar_k)
    Rng rng(29);
    const double h = 1e-5;
    for (auto spec : {two_wave(3, 0.5), three_wave_a(3, 0.5), three_wave_b(3, 0.5)}) {
        for (int s = 0; s < 50; ++s) {
            std::vector<Complex> z(spec.components());
            for (auto& c : z) c = rng.complex_in_box(1.5);
            for (int k = 0; k < spec.components(); ++k) {
                auto evalF = [&](Complex dz) {
                    auto w = z;
                    w[k] += dz;
                    return eval_potential(spec.potential, w);
                };
                Complex dFdx = (evalF({h, 0}) - evalF({-h, 0})) / (2 * h);
                Complex dFdy = (evalF({0, h}) - evalF({0, -h})) / (2 * h);
                Complex fd = 0.5 * (dFdx + Complex{0, 1} * dFdy) +
                             std::conj(0.5 * (dFdx - Complex{0, 1} * dFdy));
                CHECK(std::abs(eval_f(spec, k, z) - fd) <= 1e-10);
            }
        }
    }
}

TEST_CASE("check_hypotheses on the built-ins") {
    for (auto spec : {two_wave(3, 0.5), three_wave_a(3, 0.5), three_wave_b(3, 0.5)}) {
        auto rep = check_hypotheses(spec, 1000, 42);
        CHECK(rep.all_pass());
        for (const HypothesisItem* it :
             {&rep.h1, &rep.h3, &rep.h4, &rep.h5, &rep.h7, &rep.h8})
            CHECK(it->residual <= 1e-12);
        CHECK(rep.remark.residual <= 1e-13);
        CHECK(rep.h8.checked);
    }
}

TEST_CASE("check_hypotheses on the zero potential") {
    SystemSpec spec;
    spec.name = "zero";
    spec.dim = 3;
    spec.b = 0.5;
    spec.alpha = {1.0, 1.0};
    spec.gamma = {1.0, 1.0};
    spec.beta = {0.0, 0.0};
    spec.sigma = {1.0, 2.0};
    spec.potential.components = 2;
    spec.finalize();
    auto rep = check_hypotheses(spec, 200, 3);
    for (const HypothesisItem* it : {&rep.h1, &rep.h2, &rep.h3, &rep.h4, &rep.h5, &rep.h6, &rep.h7})
        CHECK(it->pass);
    CHECK_FALSE(rep.h8.checked);  // no decomposition supplied
}

TEST_CASE("corrupted gauge weights fail H4 with a witness") {
    auto spec = two_wave(3, 0.5);
    spec.sigma = {1.0, 1.0};
    spec.finalize();
    auto rep = check_hypotheses(spec, 500, 5);
    CHECK_FALSE(rep.h4.pass);
    CHECK(rep.h4.witness.size() == 2);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("hypothesis report serializes") {
    auto rep = check_hypotheses(two_wave(3, 0.5), 50, 1);
    auto text = rep.to_text();
    CHECK(text.find("H4.pass = 1") != std::string::npos);
    CHECK(text.find("all_pass = 1") != std::string::npos);
}

TEST_CASE("spec validation rejects bad parameters") {
    CHECK_THROWS_AS((void)two_wave(7, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)two_wave(3, 1.7), std::invalid_argument);  // b >= min(2, n/2)
    auto bad = two_wave(3, 0.5);
    bad.gamma = {1.0, -1.0};
    CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
}
