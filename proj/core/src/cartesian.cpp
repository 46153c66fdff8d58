#include "inls/cartesian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace inls {

namespace {

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// 24-point Gauss-Legendre on [0,1].
struct Gauss {
    std::array<double, 24> x{}, w{};
    Gauss() {
        // Newton iteration on Legendre P_24.
        const int n = 24;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = 0.5 * (1.0 + t);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

double box_integral(int n, double b, const std::array<double, 2>& bx, const std::array<double, 2>& by,
                    const std::array<double, 2>& bz, const Gauss& G) {
    // integral of |y|^{-b} over an axis-aligned box not containing the origin
    double s = 0.0;
    auto r2 = [](double a2, double b2, double c2) { return a2 + b2 + c2; };
    if (n == 1) {
        for (int i = 0; i < 24; ++i) {
            double xx = bx[0] + (bx[1] - bx[0]) * G.x[i];
            s += G.w[i] * std::pow(std::abs(xx), -b);
        }
        return s * (bx[1] - bx[0]);
    }
    if (n == 2) {
        for (int i = 0; i < 24; ++i)
            for (int j = 0; j < 24; ++j) {
                double xx = bx[0] + (bx[1] - bx[0]) * G.x[i];
                double yy = by[0] + (by[1] - by[0]) * G.x[j];
                s += G.w[i] * G.w[j] * std::pow(r2(xx * xx, yy * yy, 0.0), -b / 2);
            }
        return s * (bx[1] - bx[0]) * (by[1] - by[0]);
    }
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j)
            for (int k = 0; k < 24; ++k) {
                double xx = bx[0] + (bx[1] - bx[0]) * G.x[i];
                double yy = by[0] + (by[1] - by[0]) * G.x[j];
                double zz = bz[0] + (bz[1] - bz[0]) * G.x[k];
                s += G.w[i] * G.w[j] * G.w[k] * std::pow(r2(xx * xx, yy * yy, zz * zz), -b / 2);
            }
    return s * (bx[1] - bx[0]) * (by[1] - by[0]) * (bz[1] - bz[0]);
}

}  // namespace

double origin_cell_average_unit(int n, double b) {
    if (b == 0.0) return 1.0;
    if (n == 1) return 1.0 / (1.0 - b);  // (1/2) * 2 int_0^1 y^-b dy
    static const Gauss G;
    // positive orthant of [0,1]^n: I = S / (1 - 2^{b-n}) where S is the integral
    // over [0,1]^n minus [0,1/2]^n (the inner half-cube rescales by 2^{b-n}).
    double S = 0.0;
    const std::array<double, 2> lo{0.0, 0.5}, hiR{0.5, 1.0}, full{0.0, 1.0};
    if (n == 2) {
        S = box_integral(2, b, hiR, full, {}, G) + box_integral(2, b, lo, hiR, {}, G);
    } else {
        S = box_integral(3, b, hiR, full, full, G) + box_integral(3, b, lo, hiR, full, G) +
            box_integral(3, b, lo, lo, hiR, G);
    }
    double I = S / (1.0 - std::pow(2.0, b - n));
    return I;  // average over [-1,1]^n = I * 2^n / 2^n
}

CartesianGrid::CartesianGrid(int n, int M, double L) : dim(n), extent(L), points_per_axis(M) {
    if (n < 1 || n > 3) throw std::invalid_argument("CartesianGrid: dimension must be in 1..3");
    if (!power_of_two(M)) throw std::invalid_argument("CartesianGrid: M must be a power of two");
    if (!(L > 0)) throw std::invalid_argument("CartesianGrid: extent must be positive");
    h = 2.0 * L / M;
    axis.resize(M);
    wavenumber.resize(M);
    for (int i = 0; i < M; ++i) {
        axis[i] = -L + i * h;
        int signed_idx = (i <= M / 2) ? i : i - M;
        wavenumber[i] = std::numbers::pi / L * signed_idx;
    }
}

std::size_t CartesianGrid::total() const {
    std::size_t t = 1;
    for (int d = 0; d < dim; ++d) t *= points_per_axis;
    return t;
}

double CartesianGrid::cell_volume() const { return std::pow(h, dim); }

std::array<int, 3> CartesianGrid::unflatten(std::size_t idx) const {
    std::array<int, 3> out{0, 0, 0};
    for (int d = dim - 1; d >= 0; --d) {
        out[d] = static_cast<int>(idx % points_per_axis);
        idx /= points_per_axis;
    }
    return out;
}

double CartesianGrid::radius(std::size_t idx) const {
    auto iv = unflatten(idx);
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += axis[iv[d]] * axis[iv[d]];
    return std::sqrt(s);
}

std::vector<double> CartesianGrid::singular_weight(double b) const {
    std::vector<double> w(total());
    const double origin = origin_cell_average_unit(dim, b) * std::pow(0.5 * h, -b);
    for (std::size_t i = 0; i < w.size(); ++i) {
        double r = radius(i);
        w[i] = (r == 0.0) ? origin : std::pow(r, -b);
    }
    return w;
}

double CartesianGrid::gradient_norm2(const std::vector<Complex>& u) const {
    // spectral derivative via FFT: sum_k |k|^2 |u_hat_k|^2 * normalization
    const int M = points_per_axis;
    std::vector<Complex> work(u);
    fftw_plan plan = fftw_plan_dft(dim, std::vector<int>(dim, M).data(),
                                   reinterpret_cast<fftw_complex*>(work.data()),
                                   reinterpret_cast<fftw_complex*>(work.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    double s = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto iv = unflatten(i);
        double k2 = 0.0;
        for (int d = 0; d < dim; ++d) k2 += wavenumber[iv[d]] * wavenumber[iv[d]];
        s += k2 * std::norm(work[i]);
    }
    // Parseval with the unnormalized transform: sum_k |u_hat|^2 = M^n sum_j |u_j|^2.
    return s * cell_volume() / static_cast<double>(total());
}

}  // namespace inls
