#pragma once

#include <array>
#include <complex>
#include <vector>

namespace inls {

using Complex = std::complex<double>;

// Periodic box [-L, L)^n, n in {1,2,3}, M points per axis (power of two).
// Exists for the scaling-symmetry check and low-dimensional visual runs; the
// dichotomy experiments stay on the radial backend.
struct CartesianGrid {
    int dim;
    double extent;        // L
    int points_per_axis;  // M
    double h;             // 2L/M
    std::vector<double> axis;  // x_i = -L + i h
    std::vector<double> wavenumber;  // signed FFT ordering, k_i = pi/L * (signed index)

    CartesianGrid(int n, int M, double L);

    std::size_t total() const;
    double cell_volume() const;  // h^n
    std::array<int, 3> unflatten(std::size_t idx) const;
    double radius(std::size_t idx) const;  // |x| at node

    // |x|^{-b} sampled at nodes; the origin node gets the exact cell average,
    // which scales as h^{-b} so the scaling symmetry stays exact.
    std::vector<double> singular_weight(double b) const;

    // trapezoid-in-periodic-box gradient energy (spectral accuracy for smooth u)
    double gradient_norm2(const std::vector<Complex>& u) const;
};

// Average of |y|^{-b} over the unit-half-width cell [-1,1]^n, computed once by
// shell decomposition (the inner cube rescales exactly).
double origin_cell_average_unit(int n, double b);

}  // namespace inls
