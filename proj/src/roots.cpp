#include "qwalk/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwalk {

namespace {

// Bisection on [a, b] given fa, fb of opposite sign (or one of them zero).
template <class F>
double bisect(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double circle_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

std::vector<double> merge_sorted(std::vector<double> roots, double tol) {
  for (double& r : roots) r = wrap_momentum(r);
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && circle_distance(out.back(), r) < tol) continue;
    out.push_back(r);
  }
  if (out.size() > 1 && circle_distance(out.front(), out.back()) < tol) out.pop_back();
  return out;
}

std::vector<double> scan_grid(const WalkParams& p, int m, double level, const RootScanOptions& opts) {
  if (opts.scan_points < 8) throw std::invalid_argument("root scan: too few grid points");
  auto f = [&](double q) { return omega_deriv(q, m, p) - level; };
  const int n = opts.scan_points;
  const double h = kTwoPi / n;
  std::vector<double> roots;
  double qa = -kPi;
  double fa = f(qa);
  for (int i = 1; i <= n; ++i) {
    const double qb = -kPi + i * h;
    const double fb = f(qb);
    if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) roots.push_back(bisect(f, qa, qb, fa, fb));
    qa = qb;
    fa = fb;
  }
  return merge_sorted(std::move(roots), opts.tol_merge);
}

std::vector<double> roots_recursive(const WalkParams& p, int m, double level,
                                    const RootScanOptions& opts) {
  if (m >= opts.max_order) return scan_grid(p, m, level, opts);
  const auto critical = roots_recursive(p, m + 1, 0.0, opts);
  return derivative_roots_between(p, m, level, critical, opts);
}

}  // namespace

std::vector<double> derivative_roots_between(const WalkParams& p, int m, double level,
                                             const std::vector<double>& critical,
                                             const RootScanOptions& opts) {
  if (m < 1) throw std::invalid_argument("derivative_roots: order must be >= 1");
  if (critical.empty()) return scan_grid(p, m, level, opts);

  auto f = [&](double q) { return omega_deriv(q, m, p) - level; };
  const std::size_t nc = critical.size();
  std::vector<double> fc(nc);
  for (std::size_t i = 0; i < nc; ++i) fc[i] = f(critical[i]);

  std::vector<double> roots;
  // Arc i runs from critical[i] to critical[i+1] (the last one wraps by 2 pi).
  auto arc_changes_sign = [&](std::size_t i) {
    const std::size_t j = (i + 1) % nc;
    return (fc[i] < 0.0) != (fc[j] < 0.0) && fc[i] != 0.0 && fc[j] != 0.0;
  };
  for (std::size_t i = 0; i < nc; ++i) {
    const std::size_t j = (i + 1) % nc;
    double a = critical[i];
    double b = critical[j];
    if (j <= i) b += kTwoPi;
    if (nc == 1) b = a + kTwoPi;
    if (fc[i] == 0.0) roots.push_back(a);
    if (arc_changes_sign(i)) roots.push_back(bisect(f, a, b, fc[i], fc[j]));
  }
  // Touching roots: |f| tiny at a critical point with no crossing on either side.
  for (std::size_t i = 0; i < nc; ++i) {
    if (fc[i] == 0.0 || std::abs(fc[i]) >= opts.tol_value) continue;
    const std::size_t prev = (i + nc - 1) % nc;
    if (!arc_changes_sign(prev) && !arc_changes_sign(i)) roots.push_back(critical[i]);
  }
  return merge_sorted(std::move(roots), opts.tol_merge);
}

std::vector<double> derivative_roots(const WalkParams& p, int m, double level,
                                     const RootScanOptions& opts) {
  if (m < 1) throw std::invalid_argument("derivative_roots: order must be >= 1");
  return roots_recursive(p, m, level, opts);
}

}  // namespace qwalk
