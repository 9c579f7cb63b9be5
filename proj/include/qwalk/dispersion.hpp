#pragma once

// Single-particle dispersion of the walk with real nearest-neighbour hopping
// (strength 1) and complex next-nearest-neighbour hopping g*exp(i*phi):
//
//   w(q) = 2 cos q + 2 g cos(2q + phi)
//
// Energies are in units of the nearest-neighbour coupling, lengths in lattice
// spacings.

#include <numbers>

namespace qwalk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct WalkParams {
  double g = 0.0;    // NNN / NN coupling ratio, >= 0
  double phi = 0.0;  // NNN phase in radians

  // Throws ConfigError when g is negative or either field is non-finite.
  void validate() const;
};

// Result of reducing an arbitrary (g, phi) to the canonical range
// g >= 0, 0 <= phi <= pi/2.  The raw dispersion is recovered as
//
//   w_raw(q) = energy_sign * w_canonical(momentum_sign * q + momentum_shift)
//
// and every position-space observable of the raw model equals the canonical
// one evaluated at position_sign() * n.
struct CanonicalParams {
  WalkParams params;
  int energy_sign = 1;
  int momentum_sign = 1;
  double momentum_shift = 0.0;  // 0 or pi

  [[nodiscard]] bool is_identity() const {
    return energy_sign == 1 && momentum_sign == 1 && momentum_shift == 0.0;
  }
  [[nodiscard]] int position_sign() const { return energy_sign * momentum_sign; }
  // Canonical wave-vector corresponding to a raw one, wrapped into [-pi, pi).
  [[nodiscard]] double to_canonical_momentum(double q_raw) const;
};

// Reduces any finite (g, phi_raw) using 2*pi periodicity, g -> -g with
// phi -> phi + pi, reflection q -> -q and the shift q -> q + pi (which
// negates the energy). Throws ConfigError on non-finite input.
CanonicalParams canonicalize(double g, double phi_raw);

double omega(double q, const WalkParams& p);

// m-th analytic derivative of omega, m >= 1:
//   2 cos(q + m pi/2) + 2^(m+1) g cos(2q + phi + m pi/2)
// Throws std::invalid_argument for m < 1.
double omega_deriv(double q, int m, const WalkParams& p);

inline double group_velocity(double q, const WalkParams& p) { return omega_deriv(q, 1, p); }

// Wraps q into [-pi, pi).
double wrap_momentum(double q);

}  // namespace qwalk
