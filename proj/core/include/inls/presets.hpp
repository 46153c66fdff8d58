#pragma once

#include <map>
#include <string>

#include "inls/interaction.hpp"

namespace inls {

// Canonical built-in systems. All are stored in the form
//   i alpha_k d_t u_k + gamma_k Lap u_k - beta_k u_k + |x|^{-b} f_k(u) = 0
// with f_k derived from the potential, so (H3) holds by construction.

// Degenerate two-wave chi^(2) interaction, F = conj(z1)^2 z2, sigma = (1, 2).
// The fundamental equation is doubled, so alpha = (2, 2), gamma = (1, kappa),
// beta = (0, 2*gtilde).
SystemSpec two_wave(int n, double b, double kappa = 1.0, double gtilde = 0.0);

// Three-wave cascade, F = conj(z1)(z2^2 + z3^2)/2, sigma = (2, 1, 1),
// alpha = (2, 1, 1), beta = (beta_t, beta_t1, 1).
SystemSpec three_wave_a(int n, double b, double beta_t = 1.0, double beta_t1 = 1.0);

// Three-wave mixing, F = z1^2 conj(z2)/2 + z1 z2 conj(z3), sigma = (1, 2, 3),
// alpha = (1, 2, 3), beta = (1, beta_t, beta_t1).
SystemSpec three_wave_b(int n, double b, double beta_t = 1.0, double beta_t1 = 1.0);

// Scalar benchmark with f(psi) = psi^2 on the real cone: F = z^2 conj(z)/3.
// No gauge weight makes Re F phase invariant for l = 1; the preset exists for
// the elliptic/variational benchmarks, and the H4 check reports the failure.
SystemSpec single_quadratic(int n, double b);

// Lookup by preset name with parameter slots (kappa, beta_t, beta_t1, gtilde).
SystemSpec make_preset(const std::string& name, int n, double b,
                       const std::map<std::string, double>& params = {});

}  // namespace inls
