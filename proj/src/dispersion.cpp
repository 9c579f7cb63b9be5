#include "qwalk/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// cos(x + m*pi/2) without adding a rounded multiple of pi/2 to x.
double cos_quarter_shift(double x, int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return std::cos(x);
    case 1: return -std::sin(x);
    case 2: return -std::cos(x);
    default: return std::sin(x);
  }
}

}  // namespace

void WalkParams::validate() const {
  if (!std::isfinite(g)) throw ConfigError("g must be finite");
  if (!std::isfinite(phi)) throw ConfigError("phi must be finite");
  if (g < 0.0) throw ConfigError("g must be >= 0, got " + std::to_string(g));
}

double wrap_momentum(double q) {
  double r = std::fmod(q + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  return r >= kPi ? -kPi : r;
}

double CanonicalParams::to_canonical_momentum(double q_raw) const {
  return wrap_momentum(momentum_sign * q_raw + momentum_shift);
}

CanonicalParams canonicalize(double g, double phi_raw) {
  if (!std::isfinite(g) || !std::isfinite(phi_raw)) {
    throw ConfigError("canonicalize: non-finite coupling or phase");
  }
  double phi = phi_raw;
  if (g < 0.0) {
    g = -g;
    phi += kPi;
  }
  // phi into [-pi/2, 3pi/2)
  phi = std::fmod(phi + kPi / 2.0, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  phi -= kPi / 2.0;

  CanonicalParams out;
  if (phi > kPi / 2.0) {
    // w(q; g, phi) = -w(q + pi; g, phi - pi)
    out.energy_sign = -1;
    out.momentum_shift = kPi;
    phi -= kPi;
  }
  if (phi < 0.0) {
    // w(q; g, phi) = w(-q; g, -phi)
    out.momentum_sign = -1;
    phi = -phi;
  }
  // Keep the exact boundary value when it is reached by round-off.
  if (std::abs(phi - kPi / 2.0) < 1e-15) phi = kPi / 2.0;
  out.params = WalkParams{g, phi};
  return out;
}

double omega(double q, const WalkParams& p) {
  return 2.0 * std::cos(q) + 2.0 * p.g * std::cos(2.0 * q + p.phi);
}

double omega_deriv(double q, int m, const WalkParams& p) {
  if (m < 1) throw std::invalid_argument("omega_deriv: order must be >= 1");
  const double nnn = std::ldexp(p.g, m + 1);  // 2^(m+1) g
  return 2.0 * cos_quarter_shift(q, m) + nnn * cos_quarter_shift(2.0 * q + p.phi, m);
}

}  // namespace qwalk
