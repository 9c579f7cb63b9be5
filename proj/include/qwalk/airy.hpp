#pragma once

// Generalized Airy functions.
//
//   A_k(xi) = int dEta/2pi exp(-i xi eta - i eta^(k+2)/(k+2))
//
// For odd k the integrand is conjugate-symmetric and A_k is real; A_1 is the
// classical Airy function. The profile decays for xi > 0 and oscillates for
// xi < 0.

#include <vector>

namespace qwalk {

// Throws std::invalid_argument for even or non-positive k, ConfigError for |xi| > 50.
double generalized_airy(int k, double xi);

// |A_k^(k+1)(xi) - (-1)^k i^(k+1) xi A_k(xi)| with the derivative taken by a
// high-order central difference of generalized_airy.
double airy_ode_residual(int k, double xi);

// Central finite-difference weights (Fornberg) for the d-th derivative on the
// stencil -r..r, unit spacing.
std::vector<double> central_difference_weights(int derivative, int radius);

}  // namespace qwalk
