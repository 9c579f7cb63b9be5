#include "qwalk/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/roots.hpp"

namespace qwalk {

namespace {

// Roots of w'' of multiplicity > 1 are only bracketed to ~tol^{1/multiplicity}.
// Walk up the derivatives: while w^{(j)} has a nearby root at which every lower
// derivative (from w'') is still negligible, move the front there.
double polish_multiple_root(double q, const WalkParams& p, const FrontOptions& opts) {
  for (int j = 3; j <= opts.max_order + 1; ++j) {
    double r = q;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const double slope = omega_deriv(r, j + 1, p);
      if (slope == 0.0) break;
      const double step = omega_deriv(r, j, p) / slope;
      r -= step;
      if (std::abs(r - q) > 1e-4) break;
      if (std::abs(step) < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged || std::abs(omega_deriv(r, 2, p)) >= opts.tol_root) return q;
    for (int i = 3; i < j; ++i) {
      if (std::abs(omega_deriv(r, i, p)) >= opts.tol_order) return q;
    }
    q = r;
  }
  return q;
}

}  // namespace

std::string_view to_string(ConeTopology t) {
  switch (t) {
    case ConeTopology::OneCone: return "OneCone";
    case ConeTopology::TwoNestedCones: return "TwoNestedCones";
    case ConeTopology::TwoOverlappingCones: return "TwoOverlappingCones";
    case ConeTopology::CriticalSecondOrder: return "CriticalSecondOrder";
    case ConeTopology::CriticalThirdOrder: return "CriticalThirdOrder";
  }
  return "?";
}

std::string_view to_string(Chirality c) { return c == Chirality::left ? "left" : "right"; }

std::vector<ExtremalFront> FrontDiagram::fronts_at(double velocity, double tol_degen) const {
  std::vector<ExtremalFront> out;
  for (const auto& f : fronts) {
    if (std::abs(f.velocity - velocity) <= tol_degen) out.push_back(f);
  }
  return out;
}

std::vector<ExtremalFront> find_extremal_fronts(const WalkParams& p, const FrontOptions& opts) {
  p.validate();
  if (!(opts.tol_root > 0.0)) throw std::invalid_argument("find_extremal_fronts: tol_root must be > 0");

  RootScanOptions scan;
  scan.scan_points = opts.scan_points;
  scan.tol_value = opts.tol_root;
  std::vector<double> roots;
  for (double q : derivative_roots(p, 2, 0.0, scan)) {
    q = wrap_momentum(polish_multiple_root(q, p, opts));
    const bool dup = std::any_of(roots.begin(), roots.end(), [&](double r) {
      return std::abs(wrap_momentum(r - q)) <= scan.tol_merge;
    });
    if (!dup) roots.push_back(q);
  }

  std::vector<ExtremalFront> fronts;
  fronts.reserve(roots.size());
  for (double q : roots) {
    if (std::abs(omega_deriv(q, 2, p)) >= opts.tol_root) {
      throw GuardViolation("find_extremal_fronts: root at q=" + std::to_string(q) +
                           " not refined below tol_root");
    }
    ExtremalFront f;
    f.q_star = q;
    f.velocity = omega_deriv(q, 1, p);
    f.chirality = f.velocity < 0.0 ? Chirality::left : Chirality::right;
    f.order = 0;
    double factorial = 1.0;  // (k+1)!
    for (int k = 1; k <= opts.max_order; ++k) {
      factorial *= (k + 1);
      const double d = omega_deriv(q, k + 2, p);
      if (std::abs(d) >= opts.tol_order) {
        f.order = k;
        f.kappa = d / factorial;
        break;
      }
    }
    if (f.order == 0) {
      throw GuardViolation("find_extremal_fronts: cannot classify front at q=" + std::to_string(q));
    }
    fronts.push_back(f);
  }
  std::sort(fronts.begin(), fronts.end(),
            [](const ExtremalFront& a, const ExtremalFront& b) {
              return a.velocity < b.velocity || (a.velocity == b.velocity && a.q_star < b.q_star);
            });
  return fronts;
}

double critical_coupling(double phi, double tol_g, const FrontOptions& opts) {
  if (!(phi >= 0.0 && phi <= kPi / 2.0 + 1e-12)) {
    throw ConfigError("critical_coupling: phi must lie in [0, pi/2]");
  }
  if (!(tol_g > 0.0)) throw ConfigError("critical_coupling: tol_g must be > 0");
  auto count = [&](double g) { return find_extremal_fronts(WalkParams{g, phi}, opts).size(); };

  double lo = 0.0;
  double hi = 4.0;
  if (count(lo) > 2 || count(hi) <= 2) {
    throw GuardViolation("critical_coupling: no 2 -> 4 front-count change in g in (0, 4]");
  }
  while (hi - lo > tol_g) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) > 2) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

FrontDiagram cone_topology(const WalkParams& p, const FrontOptions& opts) {
  FrontDiagram d;
  d.params = p;
  d.fronts = find_extremal_fronts(p, opts);
  if (d.fronts.empty()) throw GuardViolation("cone_topology: no extremal fronts found");
  d.v_lm = d.fronts.front().velocity;
  d.v_rm = d.fronts.back().velocity;

  const bool has_third = std::any_of(d.fronts.begin(), d.fronts.end(),
                                     [](const ExtremalFront& f) { return f.order == 3; });
  const bool has_second = std::any_of(d.fronts.begin(), d.fronts.end(),
                                      [](const ExtremalFront& f) { return f.order == 2; });
  bool degenerate = false;
  for (std::size_t i = 1; i < d.fronts.size(); ++i) {
    if (std::abs(d.fronts[i].velocity - d.fronts[i - 1].velocity) <= opts.tol_degen) degenerate = true;
  }

  if (has_third) {
    d.topology = ConeTopology::CriticalThirdOrder;
  } else if (has_second || d.fronts.size() == 3) {
    d.topology = ConeTopology::CriticalSecondOrder;
  } else if (d.fronts.size() == 2) {
    d.topology = ConeTopology::OneCone;
  } else if (degenerate) {
    d.topology = ConeTopology::TwoOverlappingCones;
  } else {
    d.topology = ConeTopology::TwoNestedCones;
  }
  return d;
}

std::vector<double> quartic_crosscheck(const WalkParams& p) {
  p.validate();
  if (!(p.g > 0.0)) throw ConfigError("quartic_crosscheck: requires g > 0");
  const double g = p.g;
  const double alpha = p.phi / 2.0;
  const double c2a = std::cos(2.0 * alpha);
  const double s2a = std::sin(2.0 * alpha);
  const double mu = 8.0 * g * std::sin(alpha) * std::sin(alpha) - 4.0 * g;

  // Monic companion matrix of a4 y^4 + a3 y^3 + a2 y^2 + a1 y + a0.
  const double a4 = 64.0 * g * g;
  const double a3 = 16.0 * g * c2a / a4;
  const double a2 = (1.0 + 16.0 * g * mu * c2a - 64.0 * g * g * s2a * s2a) / a4;
  const double a1 = 2.0 * mu / a4;
  const double a0 = mu * mu / a4;
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;
  companion(0, 3) = -a0;
  companion(1, 3) = -a1;
  companion(2, 3) = -a2;
  companion(3, 3) = -a3;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  const auto eig = solver.eigenvalues();

  std::vector<double> roots;
  for (int i = 0; i < 4; ++i) {
    const std::complex<double> z = eig(i);
    if (std::abs(z.imag()) > 1e-6) continue;
    const double y = z.real();
    if (std::abs(y) > 1.0 + 1e-12) continue;
    roots.push_back(std::clamp(y, -1.0, 1.0));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-7; }),
              roots.end());
  return roots;
}

QuarticComparison compare_quartic(const WalkParams& p, double tol, const FrontOptions& opts) {
  QuarticComparison out;
  out.quartic_roots = quartic_crosscheck(p);
  for (const auto& f : find_extremal_fronts(p, opts)) out.front_cosines.push_back(std::cos(f.q_star));
  std::sort(out.front_cosines.begin(), out.front_cosines.end());

  auto near = [tol](const std::vector<double>& set, double y) {
    return std::any_of(set.begin(), set.end(), [&](double s) { return std::abs(s - y) < tol; });
  };
  for (double y : out.front_cosines) {
    if (!near(out.quartic_roots, y)) out.unmatched.push_back(y);
  }
  for (double y : out.quartic_roots) {
    if (!near(out.front_cosines, y)) out.spurious.push_back(y);
  }
  return out;
}

}  // namespace qwalk
