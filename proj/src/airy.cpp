#include "qwalk/airy.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qwalk/dispersion.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using boost::math::quadrature::gauss_kronrod;

void require_odd_order(int k) {
  if (k < 1 || k % 2 == 0) {
    throw std::invalid_argument("generalized Airy: order must be odd and positive, got " +
                                std::to_string(k));
  }
}

}  // namespace

// The half-line integral (1/pi) Re int_0^inf exp(-i(xi eta + eta^m/m)) deta is
// split at x0 = max(-xi, 0)^{1/(m-1)}, the real saddle point. From x0 the
// contour leaves along the ray x0 + r exp(-i pi/(2m)); every Taylor term of the
// phase about x0 then has non-positive real part, so the integrand decays
// monotonically from modulus 1 and no cancellation beyond the finite real
// segment is needed.
double generalized_airy(int k, double xi) {
  require_odd_order(k);
  if (!std::isfinite(xi) || std::abs(xi) > 50.0) {
    throw ConfigError("generalized_airy: |xi| must be <= 50");
  }
  const int m = k + 2;
  const double inv_m = 1.0 / m;
  const double x0 = xi < 0.0 ? std::pow(-xi, 1.0 / (m - 1)) : 0.0;

  double real_part = 0.0;
  if (x0 > 0.0) {
    auto on_axis = [&](double eta) { return std::cos(xi * eta + std::pow(eta, m) * inv_m); };
    real_part = gauss_kronrod<double, 31>::integrate(on_axis, 0.0, x0, 15, 1e-13);
  }

  const std::complex<double> dir = std::polar(1.0, -kPi / (2.0 * m));
  auto on_ray = [&](double r) {
    const std::complex<double> eta = x0 + r * dir;
    const std::complex<double> phase = xi * eta + std::pow(eta, m) * inv_m;
    return (dir * std::exp(std::complex<double>(phase.imag(), -phase.real()))).real();
  };
  const double reach = std::pow(45.0 * m, inv_m) + 0.5;
  const double ray_part = gauss_kronrod<double, 31>::integrate(on_ray, 0.0, reach, 15, 1e-13);
  return (real_part + ray_part) / kPi;
}

std::vector<double> central_difference_weights(int derivative, int radius) {
  if (derivative < 0 || radius < 1 || 2 * radius < derivative) {
    throw std::invalid_argument("central_difference_weights: stencil too small");
  }
  // Fornberg's recursion on nodes -r..r, evaluation point 0.
  const int n = 2 * radius + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - radius;
  std::vector<std::vector<double>> c(n, std::vector<double>(derivative + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, derivative);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][derivative];
  return w;
}

double airy_ode_residual(int k, double xi) {
  require_odd_order(k);
  const int order = k + 1;
  const double h = order <= 2 ? 0.02 : 0.05;
  const int radius = order / 2 + 4;
  const auto w = central_difference_weights(order, radius);
  double deriv = 0.0;
  for (int i = -radius; i <= radius; ++i) deriv += w[i + radius] * generalized_airy(k, xi + i * h);
  deriv /= std::pow(h, order);
  // (-1)^k i^(k+1) is real for odd k: i^(k+1) = (-1)^((k+1)/2).
  const double sign = -1.0 * (((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0);
  return std::abs(deriv - sign * xi * generalized_airy(k, xi));
}

}  // namespace qwalk
