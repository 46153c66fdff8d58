#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace inls {

using Complex = std::complex<double>;

// One term c * prod_j z_j^zpow[j] * conj(z_j)^cpow[j] of a polynomial in (z, zbar).
struct Monomial {
    Complex coeff{0.0, 0.0};
    std::vector<int> zpow;
    std::vector<int> cpow;

    int degree() const;
    Monomial conjugated() const;  // conj coeff, swap zpow <-> cpow
};

// A polynomial in (z, zbar); the derived nonlinearities f_k are stored this way.
using MonomialList = std::vector<Monomial>;

// Cubic interaction potential F : C^l -> C.  Every term must have degree 3.
struct InteractionPotential {
    int components = 0;  // l
    std::vector<Monomial> terms;

    // Throws std::invalid_argument naming the offending term index.
    void validate() const;
    double coefficient_l1() const;  // sum |coeff|, the constant of Lemma-type bounds
};

Complex eval_potential(const InteractionPotential& F, std::span<const Complex> z);
Complex eval_monomials(const MonomialList& poly, std::span<const Complex> z);

// f_k = dF/dzbar_k + conj(dF/dz_k); each entry is a degree-2 polynomial.
std::vector<MonomialList> derive_nonlinearities(const InteractionPotential& F);

// Wirtinger derivatives of a polynomial, as polynomials (like terms collected).
MonomialList wirtinger_z(const MonomialList& poly, int k);
MonomialList wirtinger_zbar(const MonomialList& poly, int k);

// Full system definition in the canonical form
//   i alpha_k d_t u_k + gamma_k Lap u_k - beta_k u_k + |x|^{-b} f_k(u) = 0.
struct SystemSpec {
    std::string name;
    int dim = 3;     // n
    double b = 0.5;  // singularity exponent, 0 <= b < min(2, n/2)
    std::vector<double> alpha, gamma, beta, sigma;
    InteractionPotential potential;
    // Optional supermodular decomposition F = sum_s F_s for the H8 check.
    // Each part is checked on the positive real cone of its active variables.
    std::vector<MonomialList> supermodular_parts;

    // Derived once in finalize(): f_k as monomial lists.
    std::vector<MonomialList> f;

    int components() const { return potential.components; }
    void finalize();  // validates everything and derives f; throws on bad input
    // b_k = alpha_k sigma_k omega + beta_k (the zeroth-order coefficients at frequency omega)
    std::vector<double> zero_order_coefficients(double omega) const;
};

double gauge_residual(const SystemSpec& spec, std::span<const Complex> z, double theta);
double charge_identity_residual(const SystemSpec& spec, std::span<const Complex> z);

struct HypothesisItem {
    bool checked = true;
    bool pass = true;
    double residual = 0.0;
    std::vector<Complex> witness;  // failing sample, when any
};

struct HypothesisReport {
    HypothesisItem h1, h2, h3, h4, h5, h6, h7, h8;
    HypothesisItem remark;    // Im sum sigma_k f_k(z) conj(z_k) = 0
    double h2_constant = 0.0; // largest observed Lipschitz-type ratio
    bool all_pass() const;
    std::string to_text() const;  // flat key/value record
};

HypothesisReport check_hypotheses(const SystemSpec& spec, int sample_count, std::uint64_t seed);

}  // namespace inls
