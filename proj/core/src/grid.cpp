#include "inls/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "inls/cartesian.hpp"

namespace inls {

namespace {

// int_ra^rb r^{p+k} dr, written to stay accurate when rb - ra << ra.
// Extended precision: the Lagrange-basis numerators below cancel by a factor
// (r/h)^2, which double-precision moments cannot absorb at the stated
// degree-2 exactness level.
long double cell_moment(long double ra, long double rb, long double p, int k) {
    long double q = p + k + 1;
    if (ra <= 0.0L) return std::pow(rb, q) / q;
    return std::pow(ra, q) * std::expm1(q * std::log1p((rb - ra) / ra)) / q;
}

// Node weights for int_0^{rmax} r^p v(r) dr on uniform nodes r_j = j h.
// Cell 0 and any pair whose quadratic-reconstruction weights would turn
// negative (only possible next to the origin) fall back to the linear hat
// rule; everything else integrates the per-pair parabola with exact moments,
// so degree-2 integrands are captured exactly.
std::vector<double> power_weights(int N, double h, double p) {
    std::vector<double> w(N, 0.0);
    std::vector<long double> r(N);
    for (int j = 0; j < N; ++j) r[j] = static_cast<long double>(j) * h;

    auto hat_cell = [&](int j) {
        long double M0 = cell_moment(r[j], r[j + 1], p, 0);
        long double M1 = cell_moment(r[j], r[j + 1], p, 1);
        w[j] += static_cast<double>((r[j + 1] * M0 - M1) / h);
        w[j + 1] += static_cast<double>((M1 - r[j] * M0) / h);
    };
    auto pair_cells = [&](int a) {
        int m = a + 1, bb = a + 2;
        long double M0 = cell_moment(r[a], r[bb], p, 0);
        long double M1 = cell_moment(r[a], r[bb], p, 1);
        long double M2 = cell_moment(r[a], r[bb], p, 2);
        double wa = static_cast<double>((M2 - (r[m] + r[bb]) * M1 + r[m] * r[bb] * M0) /
                                        ((r[a] - r[m]) * (r[a] - r[bb])));
        double wm = static_cast<double>((M2 - (r[a] + r[bb]) * M1 + r[a] * r[bb] * M0) /
                                        ((r[m] - r[a]) * (r[m] - r[bb])));
        double wb = static_cast<double>((M2 - (r[a] + r[m]) * M1 + r[a] * r[m] * M0) /
                                        ((r[bb] - r[a]) * (r[bb] - r[m])));
        if (wa < 0.0 || wm < 0.0 || wb < 0.0) return false;
        w[a] += wa;
        w[m] += wm;
        w[bb] += wb;
        return true;
    };

    hat_cell(0);
    int c = 1;
    while (c + 1 <= N - 2) {
        if (!pair_cells(c)) {
            hat_cell(c);
            hat_cell(c + 1);
        }
        c += 2;
    }
    if (c == N - 2) hat_cell(c);
    return w;
}

// Exact moments of r^p against the P1 hat basis (smooth in j).
std::vector<double> power_hat_weights(int N, double h, double p) {
    std::vector<double> w(N, 0.0);
    for (int j = 0; j + 1 < N; ++j) {
        long double ra = static_cast<long double>(j) * h;
        long double rb = static_cast<long double>(j + 1) * h;
        long double M0 = cell_moment(ra, rb, p, 0);
        long double M1 = cell_moment(ra, rb, p, 1);
        w[j] += static_cast<double>((rb * M0 - M1) / h);
        w[j + 1] += static_cast<double>((M1 - ra * M0) / h);
    }
    return w;
}

// Pointwise finite-volume Laplacian (midpoint areas over exact cell volumes).
template <typename T>
void fv_laplacian(const RadialGrid& g, std::span<const T> psi, std::span<T> out) {
    const int N = g.points;
    if (static_cast<int>(psi.size()) != N) throw std::invalid_argument("laplacian: size mismatch");
    const double inv_h = 1.0 / g.h;
    T flux_in = T{};  // zero flux through r = 0
    for (int j = 0; j < N; ++j) {
        T up = (j + 1 < N) ? psi[j + 1] : T{};  // homogeneous Dirichlet ghost
        T flux_out = g.edge_area[j] * (up - psi[j]) * inv_h;
        out[j] = (flux_out - flux_in) / g.cell_volume[j];
        flux_in = flux_out;
    }
}

// Edge derivative of the self-adjoint family: 4-point fourth-order stencil
// beyond edge_order_cut, plain difference before it. Even reflection through
// r = 0 supplies u_{-1} = u_1; Dirichlet ghosts vanish beyond r_max.
template <typename T>
void edge_der(const RadialGrid& g, std::span<const T> u, std::span<T> out) {
    const int N = g.points;
    if (static_cast<int>(u.size()) != N) throw std::invalid_argument("edge_derivative: size mismatch");
    const double inv_h = 1.0 / g.h;
    const double c24 = inv_h / 24.0;
    for (int e = 0; e < N; ++e) {
        T um1 = (e >= 1) ? u[e - 1] : u[1];  // reflection at the origin edge
        T u0 = u[e];
        T u1 = (e + 1 < N) ? u[e + 1] : T{};
        T u2 = (e + 2 < N) ? u[e + 2] : T{};
        if (e < g.edge_order_cut || e + 2 >= N) {
            out[e] = (u1 - u0) * inv_h;
        } else {
            out[e] = (um1 - 27.0 * u0 + 27.0 * u1 - u2) * c24;
        }
    }
}

// Adjoint scatter of edge values through the derivative stencil:
// out_j = sum_e t_e D[e, j].  With t_e = a_e h (Du)_e this is the gradient of
// the Dirichlet form, so -scatter / quad_weight is the metric Laplacian.
template <typename T>
void edge_adjoint(const RadialGrid& g, std::span<const T> t, std::span<T> out) {
    const int N = g.points;
    const double inv_h = 1.0 / g.h;
    const double c24 = inv_h / 24.0;
    for (int j = 0; j < N; ++j) out[j] = T{};
    for (int e = 0; e < N; ++e) {
        if (e < g.edge_order_cut || e + 2 >= N) {
            out[e] -= t[e] * inv_h;
            if (e + 1 < N) out[e + 1] += t[e] * inv_h;
        } else {
            out[e - 1] += t[e] * c24;
            out[e] -= 27.0 * t[e] * c24;
            out[e + 1] += 27.0 * t[e] * c24;
            if (e + 2 < N) out[e + 2] -= t[e] * c24;
        }
    }
    // Origin reflection (u_{-1} = u_1) only engages when edge 0 itself uses
    // the 4-point stencil; the plain-difference edges below the cut carry no
    // u_{-1} term.
    if (g.edge_order_cut == 0 && N > 2) out[1] += t[0] * c24;
}

template <typename T>
void metric_laplacian(const RadialGrid& g, std::span<const T> psi, std::span<T> out) {
    const int N = g.points;
    std::vector<T> du(N), t(N);
    edge_der<T>(g, psi, du);
    for (int e = 0; e < N; ++e) t[e] = g.edge_stiffness[e] * g.h * du[e];
    edge_adjoint<T>(g, t, out);
    for (int j = 0; j < N; ++j) out[j] = -out[j] / g.quad_weight[j];
}

}  // namespace

RadialGrid::RadialGrid(int n, int N, double rmax) : dim(n), points(N), r_max(rmax) {
    if (n < 1 || n > 5) throw std::invalid_argument("RadialGrid: dimension must be in 1..5");
    if (N < 16) throw std::invalid_argument("RadialGrid: need at least 16 nodes");
    if (!(rmax > 0)) throw std::invalid_argument("RadialGrid: r_max must be positive");
    h = rmax / (N - 1);
    surface = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
    r.resize(N);
    for (int j = 0; j < N; ++j) r[j] = j * h;
    r[N - 1] = rmax;

    edge_area.resize(N);
    for (int j = 0; j < N; ++j) edge_area[j] = std::pow(r[j] + 0.5 * h, n - 1);

    // exact internode averages of r^{n-1}
    edge_stiffness.resize(N);
    for (int j = 0; j < N; ++j) {
        long double lo2 = r[j], hi2 = r[j] + h;
        edge_stiffness[j] = static_cast<double>((std::pow(hi2, (long double)n) - std::pow(lo2, (long double)n)) / (n * h));
    }

    // Finite-volume cell masses of r^{n-1}; the last cell extends to the ghost edge.
    cell_volume.resize(N);
    double lo = 0.0;
    for (int j = 0; j < N; ++j) {
        double hi = r[j] + 0.5 * h;
        cell_volume[j] = (std::pow(hi, n) - std::pow(lo, n)) / n;
        lo = hi;
    }

    edge_order_cut = 4;

    // Metric defined row-wise by Lap(r^2) = 2n; the last rows see the
    // Dirichlet ghosts, where the hat moments take over.
    auto hat = power_hat_weights(N, h, n - 1.0);
    quad_weight.assign(N, 0.0);
    {
        std::vector<double> r2(N), du(N), t(N), img(N);
        for (int j = 0; j < N; ++j) r2[j] = r[j] * r[j];
        edge_der<double>(*this, r2, du);
        for (int e = 0; e < N; ++e) t[e] = edge_stiffness[e] * h * du[e];
        edge_adjoint<double>(*this, t, img);
        bool ok = true;
        for (int j = 0; j < N; ++j) {
            quad_weight[j] = -img[j] / (2.0 * n);  // Lap = -scatter / c
            if (j >= N - 4) quad_weight[j] = hat[j];
            if (!(quad_weight[j] > 0.0)) ok = false;
        }
        if (!ok) quad_weight = hat;  // conservative fallback
    }
}

std::vector<double> RadialGrid::weighted_quadrature(double b) const {
    if (b >= dim) throw std::invalid_argument("weighted_quadrature: need b < n");
    return power_weights(points, h, dim - 1.0 - b);
}

std::vector<double> RadialGrid::singular_weight(double b) const {
    if (b >= dim) throw std::invalid_argument("singular_weight: need b < n");
    std::vector<double> w(points, 1.0);
    if (b == 0.0) return w;
    std::vector<double> rho(points), lap(points);
    for (int j = 0; j < points; ++j) rho[j] = std::pow(r[j], 2.0 - b);
    metric_laplacian<double>(*this, rho, lap);
    const double denom = (2.0 - b) * (dim - b);
    bool ok = true;
    for (int j = 0; j + 4 < points; ++j) {
        w[j] = lap[j] / denom;
        ok = ok && w[j] > 0.0;
    }
    for (int j = std::max(0, points - 5); j < points; ++j) w[j] = std::pow(r[j], -b);
    if (!ok) {
        // exponents near b = 2 can defeat the fit; fall back to the smooth
        // quadrature quotient, which is always positive
        auto cb = weighted_quadrature(b);
        for (int j = 0; j < points; ++j) w[j] = cb[j] / quad_weight[j];
        w[points - 1] = std::pow(r[points - 1], -b);
    }
    return w;
}

void RadialGrid::edge_derivative(std::span<const double> u, std::span<double> out) const {
    edge_der<double>(*this, u, out);
}
void RadialGrid::edge_derivative(std::span<const Complex> u, std::span<Complex> out) const {
    edge_der<Complex>(*this, u, out);
}

double RadialGrid::dot(std::span<const double> u, std::span<const double> v) const {
    double s = 0.0;
    for (int j = 0; j < points; ++j) s += quad_weight[j] * u[j] * v[j];
    return s;
}

Complex RadialGrid::dot(std::span<const Complex> u, std::span<const Complex> v) const {
    Complex s{0.0, 0.0};
    for (int j = 0; j < points; ++j) s += quad_weight[j] * u[j] * std::conj(v[j]);
    return s;
}

double weighted_integral(const RadialGrid& g, std::span<const double> v, double b) {
    if (static_cast<int>(v.size()) != g.points) throw std::invalid_argument("weighted_integral: size mismatch");
    auto w = g.weighted_quadrature(b);
    double s = 0.0;
    for (int j = 0; j < g.points; ++j) s += w[j] * v[j];
    return g.surface * s;
}

Complex weighted_integral(const RadialGrid& g, std::span<const Complex> v, double b) {
    if (static_cast<int>(v.size()) != g.points) throw std::invalid_argument("weighted_integral: size mismatch");
    auto w = g.weighted_quadrature(b);
    Complex s{0.0, 0.0};
    for (int j = 0; j < g.points; ++j) s += w[j] * v[j];
    return g.surface * s;
}

std::vector<Complex> radial_laplacian(const RadialGrid& g, std::span<const Complex> psi) {
    std::vector<Complex> out(g.points);
    fv_laplacian<Complex>(g, psi, out);
    return out;
}

std::vector<double> radial_laplacian(const RadialGrid& g, std::span<const double> psi) {
    std::vector<double> out(g.points);
    fv_laplacian<double>(g, psi, out);
    return out;
}

void laplacian_in_metric(const RadialGrid& g, std::span<const Complex> psi, std::span<Complex> out) {
    metric_laplacian<Complex>(g, psi, out);
}

void laplacian_in_metric(const RadialGrid& g, std::span<const double> psi, std::span<double> out) {
    metric_laplacian<double>(g, psi, out);
}

// The ghost edge (last entry) carries the Dirichlet boundary; it is skipped
// here so the forms measure the open domain. Fields that decay before r_max
// see no difference, and the pairing still matches <-Lap u, v> exactly for
// compactly supported data.
Complex dirichlet_pairing(const RadialGrid& g, std::span<const Complex> u, std::span<const Complex> v) {
    const int N = g.points;
    std::vector<Complex> du(N), dv(N);
    edge_der<Complex>(g, u, du);
    edge_der<Complex>(g, v, dv);
    Complex s{0.0, 0.0};
    for (int e = 0; e + 1 < N; ++e) s += g.edge_stiffness[e] * g.h * du[e] * std::conj(dv[e]);
    return s;
}

double dirichlet_form(const RadialGrid& g, std::span<const Complex> u, std::span<const Complex> v) {
    return dirichlet_pairing(g, u, v).real();
}

double dirichlet_form(const RadialGrid& g, std::span<const double> u, std::span<const double> v) {
    const int N = g.points;
    std::vector<double> du(N), dv(N);
    edge_der<double>(g, u, du);
    edge_der<double>(g, v, dv);
    double s = 0.0;
    for (int e = 0; e + 1 < N; ++e) s += g.edge_stiffness[e] * g.h * du[e] * dv[e];
    return s;
}

BandedRows operator_rows(const RadialGrid& g, double gamma, double kappa0) {
    const int N = g.points;
    BandedRows rows;
    rows.n = N;
    rows.a.assign(static_cast<std::size_t>(N) * 7, 0.0);
    const double inv_h = 1.0 / g.h;
    const double c24 = inv_h / 24.0;
    // accumulate  A_{jk} = sum_e a_e h D[e,j] D[e,k]  then rows = gamma A / c + kappa0
    auto stencil = [&](int e, int idx[4], double coef[4]) -> int {
        if (e < g.edge_order_cut || e + 2 >= N) {
            int m = 0;
            idx[m] = e;
            coef[m++] = -inv_h;
            if (e + 1 < N) {
                idx[m] = e + 1;
                coef[m++] = inv_h;
            }
            return m;
        }
        int m = 0;
        double cm1 = c24, c0 = -27.0 * c24, c1 = 27.0 * c24, c2 = -c24;
        if (e >= 1) {
            idx[m] = e - 1;
            coef[m++] = cm1;
        } else {
            idx[m] = 1;  // reflection
            coef[m++] = cm1;
        }
        idx[m] = e;
        coef[m++] = c0;
        idx[m] = e + 1;
        coef[m++] = c1;
        if (e + 2 < N) {
            idx[m] = e + 2;
            coef[m++] = c2;
        }
        return m;
    };
    int idx[4];
    double coef[4];
    for (int e = 0; e < N; ++e) {
        int m = stencil(e, idx, coef);
        double w = g.edge_stiffness[e] * g.h;
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) {
                int row = idx[i], col = idx[k];
                if (std::abs(col - row) <= BandedRows::half)
                    rows.at(row, col) += gamma * w * coef[i] * coef[k] / g.quad_weight[row];
            }
    }
    for (int j = 0; j < N; ++j) rows.at(j, j) += kappa0;
    return rows;
}

Field Field::zeros(std::shared_ptr<const RadialGrid> g, int l) {
    Field f;
    f.radial = std::move(g);
    f.comp.assign(l, std::vector<Complex>(f.radial->points, Complex{0.0, 0.0}));
    return f;
}

Field Field::zeros(std::shared_ptr<const CartesianGrid> g, int l) {
    Field f;
    f.cartesian = std::move(g);
    f.comp.assign(l, std::vector<Complex>(f.cartesian->total(), Complex{0.0, 0.0}));
    return f;
}

NormReport h1_report(const Field& u) {
    NormReport rep;
    if (u.is_radial()) {
        const auto& g = *u.radial;
        for (const auto& c : u.comp) {
            std::vector<double> mag2(g.points);
            for (int j = 0; j < g.points; ++j) mag2[j] = std::norm(c[j]);
            rep.l2.push_back(std::sqrt(weighted_integral(g, std::span<const double>(mag2), 0.0)));
            rep.grad.push_back(std::sqrt(g.surface * dirichlet_form(g, std::span<const Complex>(c),
                                                                    std::span<const Complex>(c))));
        }
    } else {
        const auto& g = *u.cartesian;
        for (const auto& c : u.comp) {
            double m = 0.0;
            for (auto z : c) m += std::norm(z);
            rep.l2.push_back(std::sqrt(m * g.cell_volume()));
            rep.grad.push_back(std::sqrt(g.gradient_norm2(c)));
        }
    }
    return rep;
}

}  // namespace inls
