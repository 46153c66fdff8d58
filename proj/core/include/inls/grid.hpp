#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace inls {

using Complex = std::complex<double>;

// Uniform radial grid on [0, r_max] with node weights for integrals
//   int_{R^n} g(|x|) dx = omega_{n-1} int_0^{r_max} g(r) r^{n-1} dr.
//
// The self-adjoint operator family is a flux form B(u, v) = sum_e a_e h
// (Du)_e conj((Dv)_e) over edges r_{j+1/2}. Edge derivatives use the 4-point
// fourth-order stencil in the bulk and fall back to plain differences on the
// first few edges (even reflection through r = 0); a_e is the exact internode
// average of r^{n-1}. The operator metric quad_weight is defined row-wise by
// the requirement Lap(r^2) = 2n, which removes the near-origin truncation
// channel that the zeroth-order terms cannot absorb. Crank-Nicolson therefore
// conserves exactly the masses reported in this metric.
//
// The singular weight r^{-b} is never sampled at r = 0: weighted_quadrature
// folds it into exact per-cell power moments, and singular_weight is the
// operator-fitted pointwise image Lap[r^{2-b}] / ((2-b)(n-b)), which keeps
// elliptic fixed points second-order accurate against the r^{2-b} behaviour
// the singular source induces.
struct RadialGrid {
    int dim;
    int points;
    double r_max;
    double h;
    double surface;  // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
    std::vector<double> r;
    std::vector<double> cell_volume;     // exact FV cell masses of r^{n-1}
    std::vector<double> quad_weight;     // operator metric (see above)
    std::vector<double> edge_area;       // r_{j+1/2}^{n-1}; last entry is the ghost edge
    std::vector<double> edge_stiffness;  // internode averages of r^{n-1}
    int edge_order_cut;                  // first edge using the 4-point stencil

    RadialGrid(int n, int N, double r_max);

    // Node weights w_j with sum_j w_j v(r_j) ~= int_0^{r_max} r^{n-1-b} v(r) dr,
    // exact for degree <= 2 polynomials v. All weights non-negative; b < n.
    std::vector<double> weighted_quadrature(double b) const;

    // Operator-fitted pointwise image of r^{-b} (see header comment).
    std::vector<double> singular_weight(double b) const;

    // Edge derivatives (Du)_e ~= u'(r_{j+1/2}) of the operator family.
    void edge_derivative(std::span<const double> u, std::span<double> out) const;
    void edge_derivative(std::span<const Complex> u, std::span<Complex> out) const;

    double dot(std::span<const double> u, std::span<const double> v) const;
    Complex dot(std::span<const Complex> u, std::span<const Complex> v) const;
};

// omega_{n-1} int r^{n-1-b} v(r) dr over the grid; rejects b >= n.
double weighted_integral(const RadialGrid& g, std::span<const double> v, double b);
Complex weighted_integral(const RadialGrid& g, std::span<const Complex> v, double b);

// Pointwise radial Laplacian psi'' + (n-1)/r psi' in conservative form
// (midpoint edge areas over exact cell volumes). At r = 0 this reduces to
// n psi''(0) under the Neumann condition psi'(0) = 0; the last node sees a
// homogeneous Dirichlet ghost value. Requires N >= 3.
std::vector<Complex> radial_laplacian(const RadialGrid& g, std::span<const Complex> psi);
std::vector<double> radial_laplacian(const RadialGrid& g, std::span<const double> psi);

// Laplacian of the self-adjoint family: <-Lap u, v>_quad_weight equals the
// Dirichlet pairing below, exactly (summation by parts).
void laplacian_in_metric(const RadialGrid& g, std::span<const Complex> psi, std::span<Complex> out);
void laplacian_in_metric(const RadialGrid& g, std::span<const double> psi, std::span<double> out);

// B(u, v) = sum_e a_e h (Du)_e conj((Dv)_e)  (no surface factor)
Complex dirichlet_pairing(const RadialGrid& g, std::span<const Complex> u, std::span<const Complex> v);
double dirichlet_form(const RadialGrid& g, std::span<const Complex> u, std::span<const Complex> v);
double dirichlet_form(const RadialGrid& g, std::span<const double> u, std::span<const double> v);

// Rows of gamma * (-Lap_metric) + kappa0 as a banded matrix (half bandwidth 3),
// row-major bands[j][k] for columns j - 3 + k. The matrix is self-adjoint in
// the quad_weight metric.
struct BandedRows {
    static constexpr int half = 3;
    int n = 0;
    std::vector<double> a;  // n x 7
    double& at(int row, int col) { return a[row * 7 + (col - row + half)]; }
    double get(int row, int col) const {
        int k = col - row + half;
        if (k < 0 || k >= 7 || col < 0 || col >= n) return 0.0;
        return a[row * 7 + k];
    }
};
BandedRows operator_rows(const RadialGrid& g, double gamma, double kappa0);

struct CartesianGrid;  // see cartesian.hpp

// l complex component arrays over one grid (radial or Cartesian).
struct Field {
    std::shared_ptr<const RadialGrid> radial;
    std::shared_ptr<const CartesianGrid> cartesian;
    std::vector<std::vector<Complex>> comp;

    bool is_radial() const { return radial != nullptr; }
    int components() const { return static_cast<int>(comp.size()); }
    std::size_t samples() const { return comp.empty() ? 0 : comp[0].size(); }

    static Field zeros(std::shared_ptr<const RadialGrid> g, int l);
    static Field zeros(std::shared_ptr<const CartesianGrid> g, int l);
};

struct NormReport {
    std::vector<double> l2;    // per-component L^2 norms
    std::vector<double> grad;  // per-component gradient L^2 norms
};

// Norms via the grid quadrature; gradients use the same flux stencils as the
// self-adjoint Laplacian (summation-by-parts consistent).
NormReport h1_report(const Field& u);

}  // namespace inls
