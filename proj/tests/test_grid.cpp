#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "inls/cartesian.hpp"
#include "inls/grid.hpp"
#include "inls/rng.hpp"
#include "inls/snapshot.hpp"
#include "oracles.hpp"

using namespace inls;

TEST_CASE("grid construction invariants") {
    RadialGrid g(3, 4096, 40.0);
    CHECK(g.r.front() == 0.0);
    CHECK(g.r.back() == 40.0);
    for (int j = 1; j < g.points; ++j) CHECK(g.r[j] > g.r[j - 1]);
    for (double w : g.quad_weight) CHECK(w >= 0.0);
    for (double w : g.weighted_quadrature(0.5)) CHECK(w >= 0.0);
    for (double w : g.weighted_quadrature(1.4)) CHECK(w >= 0.0);
    CHECK(g.surface == doctest::Approx(4 * std::numbers::pi).epsilon(1e-14));
    CHECK(RadialGrid(2, 64, 1.0).surface == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("weighted integral: unit ball volume") {
    RadialGrid g(3, 4097, 1.0);
    std::vector<double> one(g.points, 1.0);
    double v = weighted_integral(g, std::span<const double>(one), 0.0);
    CHECK(v == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-6));
}

TEST_CASE("weighted integral rejects b >= n") {
    RadialGrid g(2, 64, 1.0);
    std::vector<double> one(g.points, 1.0);
    CHECK_THROWS_AS((void)weighted_integral(g, std::span<const double>(one), 2.0),
                    std::invalid_argument);
}

TEST_CASE("weighted integral: gaussian against the closed form and quadrature oracle") {
    const double b = 0.5;
    RadialGrid g(3, 4096, 12.0);
    std::vector<double> v(g.points);
    for (int j = 0; j < g.points; ++j) v[j] = std::exp(-3.0 * g.r[j] * g.r[j]);
    double got = weighted_integral(g, std::span<const double>(v), b);
    double closed = 2.0 * std::numbers::pi * std::pow(3.0, (b - 3.0) / 2.0) * std::tgamma((3.0 - b) / 2.0);
    CHECK(got == doctest::Approx(closed).epsilon(1e-6));
    double oracle = 4.0 * std::numbers::pi *
                    oracles::adaptive_simpson(
                        [b](double r) { return std::pow(r, 2.0 - b) * std::exp(-3.0 * r * r); }, 0.0,
                        12.0, 1e-13);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-9));

    std::vector<double> zero(g.points, 0.0);
    CHECK(weighted_integral(g, std::span<const double>(zero), b) == 0.0);
}

TEST_CASE("quadrature exactness for degree <= 2 at N = 4096") {
    for (int n : {2, 3, 4, 5}) {
        RadialGrid g(n, 4096, 40.0);
        for (int deg = 0; deg <= 2; ++deg) {
            std::vector<double> v(g.points);
            for (int j = 0; j < g.points; ++j) v[j] = std::pow(g.r[j], deg);
            double got = weighted_integral(g, std::span<const double>(v), 0.0);
            double expect = g.surface * std::pow(40.0, n + deg) / (n + deg);
            CHECK(std::abs(got - expect) <= 1e-10 * expect);
        }
    }
}

TEST_CASE("radial laplacian of r^2 is 2n at interior nodes") {
    // second differences amplify representation rounding by (r/h)^2, so the
    // 1e-10 absolute check lives on a moderately refined grid
    for (int n : {2, 3, 5}) {
        RadialGrid g(n, 401, 10.0);
        std::vector<double> v(g.points);
        for (int j = 0; j < g.points; ++j) v[j] = g.r[j] * g.r[j];
        auto lap = radial_laplacian(g, std::span<const double>(v));
        for (int j = 0; j + 1 < g.points; ++j)
            CHECK(std::abs(lap[j] - 2.0 * n) <= 1e-10);
    }
}

TEST_CASE("radial laplacian of a constant vanishes away from the boundary") {
    RadialGrid g(3, 512, 8.0);
    std::vector<double> v(g.points, 3.25);
    auto lap = radial_laplacian(g, std::span<const double>(v));
    for (int j = 0; j + 1 < g.points; ++j) CHECK(std::abs(lap[j]) <= 1e-12);
}

TEST_CASE("radial laplacian second-order convergence on a gaussian") {
    auto max_err = [](int N) {
        RadialGrid g(3, N, 8.0);
        std::vector<double> v(g.points);
        for (int j = 0; j < g.points; ++j) v[j] = std::exp(-g.r[j] * g.r[j]);
        auto lap = radial_laplacian(g, std::span<const double>(v));
        double err = 0.0;
        for (int j = 0; j + 1 < g.points; ++j) {
            double r = g.r[j];
            double exact = (4 * r * r - 6) * std::exp(-r * r);
            err = std::max(err, std::abs(lap[j] - exact));
        }
        return err;
    };
    double e1 = max_err(512), e2 = max_err(1024);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("radial laplacian rejects tiny grids") {
    CHECK_THROWS_AS(RadialGrid(3, 8, 1.0), std::invalid_argument);
}

TEST_CASE("discrete integration by parts is exact for compact fields") {
    RadialGrid g(3, 2048, 20.0);
    Rng rng(31);
    std::vector<Complex> psi(g.points, Complex{}), phi(g.points, Complex{});
    for (int j = 200; j < 1500; ++j) {
        psi[j] = rng.complex_in_box(1.0);
        phi[j] = rng.complex_in_box(1.0);
    }
    std::vector<Complex> lap(g.points);
    laplacian_in_metric(g, std::span<const Complex>(psi), std::span<Complex>(lap));
    Complex lhs{0.0, 0.0};
    for (int j = 0; j < g.points; ++j) lhs += g.quad_weight[j] * (-lap[j]) * std::conj(phi[j]);
    Complex rhs = dirichlet_pairing(g, std::span<const Complex>(psi), std::span<const Complex>(phi));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    // the real part is the Dirichlet form used for gradient norms
    CHECK(std::abs(rhs.real() - dirichlet_form(g, std::span<const Complex>(psi),
                                               std::span<const Complex>(phi))) <=
          1e-12 * std::abs(rhs));

    // the pointwise form is summation-by-parts consistent in its own metric
    auto lap_fv = radial_laplacian(g, std::span<const Complex>(psi));
    Complex lhs_fv{0.0, 0.0};
    for (int j = 0; j < g.points; ++j) lhs_fv += g.cell_volume[j] * (-lap_fv[j]) * std::conj(phi[j]);
    Complex rhs_fv{0.0, 0.0};
    {
        const double inv_h = 1.0 / g.h;
        for (int j = 0; j + 1 < g.points; ++j) {
            Complex du = (psi[j + 1] - psi[j]) * inv_h;
            Complex dv = (phi[j + 1] - phi[j]) * inv_h;
            rhs_fv += g.edge_area[j] * g.h * du * std::conj(dv);
        }
    }
    CHECK(std::abs(lhs_fv - rhs_fv) <= 1e-10 * std::abs(rhs_fv));
}

TEST_CASE("h1 report on analytic fields") {
    auto grid = std::make_shared<RadialGrid>(3, 4096, 12.0);
    SUBCASE("zero field") {
        auto f = Field::zeros(grid, 2);
        auto rep = h1_report(f);
        CHECK(rep.l2[0] == 0.0);
        CHECK(rep.grad[1] == 0.0);
    }
    SUBCASE("gaussian mass") {
        auto f = Field::zeros(grid, 1);
        for (int j = 0; j < grid->points; ++j)
            f.comp[0][j] = std::exp(-grid->r[j] * grid->r[j]);
        auto rep = h1_report(f);
        double expect = std::pow(std::numbers::pi / 2.0, 1.5);
        CHECK(rep.l2[0] * rep.l2[0] == doctest::Approx(expect).epsilon(1e-6));
    }
    SUBCASE("linear ramp gradient") {
        auto g1 = std::make_shared<RadialGrid>(3, 4096, 1.0);
        auto f = Field::zeros(g1, 1);
        for (int j = 0; j < g1->points; ++j) f.comp[0][j] = g1->r[j];
        auto rep = h1_report(f);
        double ball = 4.0 * std::numbers::pi / 3.0;
        CHECK(rep.grad[0] * rep.grad[0] == doctest::Approx(ball).epsilon(2e-3));
    }
}

TEST_CASE("snapshot round trip, radial and cartesian") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "inls_snapshot_test";
    fs::create_directories(dir);
    Rng rng(37);
    {
        auto grid = std::make_shared<RadialGrid>(3, 128, 5.0);
        auto f = Field::zeros(grid, 2);
        for (auto& c : f.comp)
            for (auto& z : c) z = rng.complex_in_box(2.0);
        std::string path = (dir / "radial.inls").string();
        write_snapshot(path, f);
        auto back = read_snapshot(path);
        REQUIRE(back.is_radial());
        CHECK(back.radial->dim == 3);
        CHECK(back.radial->points == 128);
        CHECK(back.radial->r_max == 5.0);
        REQUIRE(back.components() == 2);
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 128; ++j) CHECK(back.comp[k][j] == f.comp[k][j]);
    }
    {
        auto grid = std::make_shared<CartesianGrid>(2, 16, 3.0);
        auto f = Field::zeros(grid, 1);
        for (auto& z : f.comp[0]) z = rng.complex_in_box(1.0);
        std::string path = (dir / "cartesian.inls").string();
        write_snapshot(path, f);
        auto back = read_snapshot(path);
        REQUIRE_FALSE(back.is_radial());
        CHECK(back.cartesian->points_per_axis == 16);
        for (std::size_t j = 0; j < f.comp[0].size(); ++j) CHECK(back.comp[0][j] == f.comp[0][j]);
    }
    CHECK_THROWS(read_snapshot((dir / "missing.inls").string()));
}

TEST_CASE("cartesian grid basics") {
    CHECK_THROWS_AS(CartesianGrid(2, 100, 4.0), std::invalid_argument);  // not a power of two
    CartesianGrid g(2, 64, 8.0);
    CHECK(g.total() == 64u * 64u);
    CHECK(g.h == doctest::Approx(0.25));
    // origin-cell average of |x|^{-b} scales exactly like h^{-b}
    double b = 0.5;
    auto w = g.singular_weight(b);
    CartesianGrid g2(2, 128, 8.0);
    auto w2 = g2.singular_weight(b);
    std::size_t o1 = 0, o2 = 0;
    for (std::size_t i = 0; i < g.total(); ++i)
        if (g.radius(i) == 0.0) o1 = i;
    for (std::size_t i = 0; i < g2.total(); ++i)
        if (g2.radius(i) == 0.0) o2 = i;
    CHECK(w[o1] / w2[o2] == doctest::Approx(std::pow(0.5, b)).epsilon(1e-12));
    // gradient of a plane wave
    auto f = Field::zeros(std::make_shared<CartesianGrid>(g), 1);
    double k = g.wavenumber[3];
    for (std::size_t i = 0; i < g.total(); ++i) {
        auto iv = g.unflatten(i);
        f.comp[0][i] = std::polar(1.0, k * g.axis[iv[0]]);
    }
    auto rep = h1_report(f);
    double vol = std::pow(2 * 8.0, 2);
    CHECK(rep.grad[0] * rep.grad[0] == doctest::Approx(k * k * vol).epsilon(1e-12));
}
