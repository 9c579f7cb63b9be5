#include "qwalk/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qwalk/evolve.hpp"
#include "qwalk/roots.hpp"

namespace qwalk {

namespace {

constexpr double kInvTwoPi = 1.0 / kTwoPi;

// Linear interpolation of y(x) on an increasing grid; clamps at the ends.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

void accumulate(Deviation& d, double diff, bool excluded, double t) {
  const double a = std::abs(diff);
  if (excluded) {
    d.sup_inside = std::max(d.sup_inside, a);
  } else {
    d.sup_outside = std::max(d.sup_outside, a);
    d.l1_outside += a / t;
  }
}

}  // namespace

HydroModel::HydroModel(const WalkParams& p, const FrontOptions& opts)
    : params_(p), diagram_(cone_topology(p, opts)) {
  for (const auto& f : diagram_.fronts) critical_.push_back(f.q_star);
  std::sort(critical_.begin(), critical_.end());
}

std::vector<double> HydroModel::invert_velocity(double nu) const {
  RootScanOptions opts;
  return derivative_roots_between(params_, 1, nu, critical_, opts);
}

std::vector<std::pair<double, double>> HydroModel::sublevel_arcs(double nu) const {
  std::vector<std::pair<double, double>> arcs;
  const auto roots = invert_velocity(nu);
  if (roots.empty()) {
    if (group_velocity(0.0, params_) < nu) arcs.emplace_back(-kPi, kPi);
    return arcs;
  }
  const std::size_t m = roots.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = roots[i];
    const double b = (i + 1 < m) ? roots[i + 1] : roots[0] + kTwoPi;
    if (b - a <= 0.0) continue;
    if (group_velocity(0.5 * (a + b), params_) < nu) arcs.emplace_back(a, b);
  }
  return arcs;
}

double HydroModel::cpd(double nu) const {
  if (nu <= diagram_.v_lm) return 0.0;
  if (nu >= diagram_.v_rm) return 1.0;
  double measure = 0.0;
  for (const auto& [a, b] : sublevel_arcs(nu)) measure += b - a;
  return std::clamp(measure * kInvTwoPi, 0.0, 1.0);
}

double HydroModel::ccd(double nu) const {
  if (nu <= diagram_.v_lm || nu >= diagram_.v_rm) return 0.0;
  double sum = 0.0;
  for (const auto& [a, b] : sublevel_arcs(nu)) sum += omega(b, params_) - omega(a, params_);
  return sum * kInvTwoPi;
}

double HydroModel::moment(double nu, int k, double tol) const {
  if (k < 1) throw std::invalid_argument("moment: k must be >= 1");
  if (nu <= diagram_.v_lm) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double q) { return std::pow(group_velocity(q, params_), k); };
  double sum = 0.0;
  if (nu >= diagram_.v_rm) {
    sum = gauss_kronrod<double, 61>::integrate(integrand, -kPi, kPi, 20, tol);
  } else {
    for (const auto& [a, b] : sublevel_arcs(nu)) {
      sum += gauss_kronrod<double, 61>::integrate(integrand, a, b, 20, tol);
    }
  }
  return sum * kInvTwoPi;
}

double HydroModel::half_probability_velocity() const {
  double lo = diagram_.v_lm;
  double hi = diagram_.v_rm;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cpd(mid) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> invert_velocity(const WalkParams& p, double nu, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("invert_velocity: tol must be > 0");
  return HydroModel(p).invert_velocity(nu);
}

double scaled_cpd(const WalkParams& p, double nu) { return HydroModel(p).cpd(nu); }
double scaled_ccd(const WalkParams& p, double nu) { return HydroModel(p).ccd(nu); }
double scaled_moment(const WalkParams& p, double nu, int k, double tol) {
  return HydroModel(p).moment(nu, k, tol);
}

ScalingCurve scaling_curve(const WalkParams& p, std::size_t samples, double margin) {
  if (samples < 2) throw std::invalid_argument("scaling_curve: need at least 2 samples");
  const HydroModel model(p);
  ScalingCurve c;
  c.params = p;
  const double lo = model.diagram().v_lm - margin;
  const double hi = model.diagram().v_rm + margin;
  c.m_scaled.assign(3, {});
  for (std::size_t i = 0; i < samples; ++i) {
    const double nu = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    c.nu.push_back(nu);
    c.phi_scaled.push_back(model.cpd(nu));
    c.j_scaled.push_back(model.ccd(nu));
    for (int k = 1; k <= 3; ++k) c.m_scaled[k - 1].push_back(model.moment(nu, k));
  }
  return c;
}

BulkReport compare_bulk(const WalkParams& p, double t, const BulkOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("compare_bulk: t must be > 0");
  const HydroModel model(p);
  EvolveOptions eopts;
  eopts.lattice = opts.lattice;
  const auto wf = evolve(p, t, eopts);
  const auto prob = probability_density(wf);
  const auto cpd_num = cumulative(prob);
  const auto ccd_num = cumulative(current_density(wf));
  std::vector<ObservableField> m_num;
  if (opts.with_moments) {
    for (int k = 1; k <= 3; ++k) m_num.push_back(cumulative_moment(prob, k));
  }

  BulkReport r;
  r.params = p;
  r.t = t;
  r.lattice = wf.size();
  r.window_factor = opts.window_factor;
  for (const auto& f : model.diagram().fronts) {
    const bool seen = std::any_of(r.windows.begin(), r.windows.end(), [&](const ExclusionWindow& w) {
      return std::abs(w.velocity - f.velocity) < 1e-9;
    });
    if (seen) continue;
    ExclusionWindow w;
    w.velocity = f.velocity;
    w.order = f.order;
    w.center = f.velocity * t;
    w.half_width = opts.window_factor * std::pow(std::abs(f.kappa) * t, 1.0 / (f.order + 2));
    r.windows.push_back(w);
  }

  std::vector<double> nu_grid(prob.values.size());
  for (std::size_t i = 0; i < prob.values.size(); ++i) {
    const auto n = prob.site(i);
    const double nu = (static_cast<double>(n) + 0.5) / t;
    nu_grid[i] = nu;
    bool excluded = false;
    for (const auto& w : r.windows) {
      if (std::abs(static_cast<double>(n) + 0.5 - w.center) <= w.half_width) excluded = true;
    }
    BulkRow row;
    row.n = n;
    row.nu = nu;
    row.excluded = excluded;
    row.phi_num = cpd_num.values[i];
    row.phi_hydro = model.cpd(nu);
    row.j_num = ccd_num.values[i];
    row.j_hydro = model.ccd(nu);
    accumulate(r.phi, row.phi_num - row.phi_hydro, excluded, t);
    accumulate(r.j, row.j_num - row.j_hydro, excluded, t);
    if (opts.with_moments) {
      double tk = 1.0;
      for (int k = 1; k <= 3; ++k) {
        tk *= t;
        row.m_num[k - 1] = m_num[k - 1].values[i] / tk;
        row.m_hydro[k - 1] = model.moment(nu, k);
        accumulate(r.m[k - 1], row.m_num[k - 1] - row.m_hydro[k - 1], excluded, t);
      }
    }
    if (opts.keep_rows) r.rows.push_back(row);
  }

  // Slopes on either side of each internal front, over a fixed span in nu.
  const double span = 0.05;
  for (const auto& w : r.windows) {
    if (w.velocity == model.diagram().v_lm || w.velocity == model.diagram().v_rm) continue;
    Kink k;
    k.nu = w.velocity;
    const double gap = std::max(2.0 * w.half_width / t, 0.01);
    const double l0 = w.velocity - gap - span, l1 = w.velocity - gap;
    const double r0 = w.velocity + gap, r1 = w.velocity + gap + span;
    k.slope_left_hydro = (model.cpd(l1) - model.cpd(l0)) / span;
    k.slope_right_hydro = (model.cpd(r1) - model.cpd(r0)) / span;
    k.slope_left_numeric =
        (interpolate(nu_grid, cpd_num.values, l1) - interpolate(nu_grid, cpd_num.values, l0)) / span;
    k.slope_right_numeric =
        (interpolate(nu_grid, cpd_num.values, r1) - interpolate(nu_grid, cpd_num.values, r0)) / span;
    r.kinks.push_back(k);
  }

  r.nu_half_hydro = model.half_probability_velocity();
  for (std::size_t i = 1; i < nu_grid.size(); ++i) {
    const double a = cpd_num.values[i - 1];
    const double b = cpd_num.values[i];
    if (a < 0.5 && b >= 0.5) {
      r.nu_half_numeric = nu_grid[i - 1] + (0.5 - a) / (b - a) * (nu_grid[i] - nu_grid[i - 1]);
      break;
    }
  }
  return r;
}

}  // namespace qwalk
