#include "qwalk/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using boost::math::quadrature::gauss_kronrod;

void require_odd_front(const ExtremalFront& front) {
  if (front.order % 2 == 0) {
    throw std::invalid_argument("edge profile: front of even order " + std::to_string(front.order) +
                                " has no real staircase");
  }
}

// Centered moving average over `width` samples (width >= 1), shrinking at the ends.
std::vector<double> moving_average(const std::vector<double>& y, int width) {
  if (width <= 1) return y;
  const int left = (width - 1) / 2;
  const int right = width - 1 - left;
  const auto n = static_cast<long>(y.size());
  std::vector<double> out(y.size());
  for (long i = 0; i < n; ++i) {
    const long a = std::max(0L, i - left);
    const long b = std::min(n - 1, i + right);
    double s = 0.0;
    for (long j = a; j <= b; ++j) s += y[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / static_cast<double>(b - a + 1);
  }
  return out;
}

// Least-squares quadratic over 5 samples, derivative at the centre.
std::vector<double> smoothed_derivative(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) return d;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (-2.0 * y[i - 2] - y[i - 1] + y[i + 1] + 2.0 * y[i + 2]) / (10.0 * h);
  }
  d[0] = d[1] = d[2];
  d[n - 1] = d[n - 2] = d[n - 3];
  return d;
}

// Vertex of the parabola through (i-1, i, i+1), as a fractional index.
double refine_extremum(const std::vector<double>& d, std::size_t i) {
  if (i == 0 || i + 1 >= d.size()) return static_cast<double>(i);
  const double a = d[i - 1], b = d[i], c = d[i + 1];
  const double denom = a - 2.0 * b + c;
  if (denom == 0.0) return static_cast<double>(i);
  const double shift = 0.5 * (a - c) / denom;
  return static_cast<double>(i) + std::clamp(shift, -0.5, 0.5);
}

double sample_at(const std::vector<double>& y, double fractional_index) {
  const double clamped = std::clamp(fractional_index, 0.0, static_cast<double>(y.size() - 1));
  const auto i = static_cast<std::size_t>(std::floor(clamped));
  if (i + 1 >= y.size()) return y.back();
  const double w = clamped - static_cast<double>(i);
  return (1.0 - w) * y[i] + w * y[i + 1];
}

}  // namespace

int front_direction(const ExtremalFront& front) {
  require_odd_front(front);
  return front.kappa > 0.0 ? 1 : -1;
}

double edge_scale(const ExtremalFront& front, double t) {
  return std::pow(std::abs(front.kappa) * t, 1.0 / (front.order + 2));
}

EdgeProfile predict_edge(const ExtremalFront& front, double t, std::span<const double> xi_grid,
                         int multiplicity) {
  require_odd_front(front);
  if (!(t > 0.0)) throw std::invalid_argument("predict_edge: t must be > 0");
  if (!std::is_sorted(xi_grid.begin(), xi_grid.end())) {
    throw std::invalid_argument("predict_edge: xi grid must be sorted");
  }
  EdgeProfile out;
  out.front = front;
  out.t = t;
  out.scale = edge_scale(front, t);
  out.direction = front_direction(front);
  out.multiplicity = multiplicity;
  out.source = ProfileSource::predicted;
  out.xi.assign(xi_grid.begin(), xi_grid.end());
  out.dphi_scaled.resize(out.xi.size());
  out.dj_scaled.resize(out.xi.size());

  const int k = front.order;
  auto density = [k](double x) {
    const double a = generalized_airy(k, -x);
    return a * a;
  };
  auto piece = [&](double a, double b) {
    return a == b ? 0.0 : gauss_kronrod<double, 15>::integrate(density, a, b, 0, 0.0);
  };

  // Accumulate outward from x = 0 in both directions.
  const auto& x = out.xi;
  const auto zero = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), 0.0) - x.begin());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = zero; i < x.size(); ++i) {
    acc += piece(prev, x[i]);
    prev = x[i];
    out.dphi_scaled[i] = multiplicity * acc;
  }
  acc = 0.0;
  prev = 0.0;
  for (std::size_t i = zero; i-- > 0;) {
    acc += piece(prev, x[i]);
    prev = x[i];
    out.dphi_scaled[i] = multiplicity * acc;
  }
  for (std::size_t i = 0; i < x.size(); ++i) out.dj_scaled[i] = front.velocity * out.dphi_scaled[i];
  return out;
}

CumulativeFields CumulativeFields::from(const WaveFunction& wf) {
  return CumulativeFields{cumulative(probability_density(wf)), cumulative(current_density(wf))};
}

EdgeProfile measure_edge(const CumulativeFields& fields, const FrontDiagram& diagram,
                         const ExtremalFront& front, long window) {
  require_odd_front(front);
  if (window < 5) throw ConfigError("measure_edge: window must be at least 5 sites");
  const double t = fields.cpd.t;
  const double tol_degen = 1e-9;

  int multiplicity = 0;
  double max_dq = 0.0;
  for (const auto& f : diagram.fronts) {
    if (std::abs(f.velocity - front.velocity) <= tol_degen) {
      ++multiplicity;
      const double d = std::abs(wrap_momentum(f.q_star - front.q_star));
      max_dq = std::max(max_dq, d);
    } else if (std::abs(f.velocity - front.velocity) * t <= static_cast<double>(window)) {
      throw ConfigError("measure_edge: window of " + std::to_string(window) +
                        " sites reaches the front moving at v = " + std::to_string(f.velocity));
    }
  }
  multiplicity = std::max(multiplicity, 1);

  std::vector<double> cpd = fields.cpd.values;
  std::vector<double> ccd = fields.ccd.values;
  if (multiplicity > 1 && max_dq > 0.0) {
    const int period = std::max(2, static_cast<int>(std::lround(kTwoPi / max_dq)));
    cpd = moving_average(cpd, period);
    ccd = moving_average(ccd, period);
  }

  EdgeProfile out;
  out.front = front;
  out.t = t;
  out.scale = edge_scale(front, t);
  out.direction = front_direction(front);
  out.multiplicity = multiplicity;
  out.source = ProfileSource::numeric;

  // Site n's inclusive prefix sum lives at the cell edge n + 1/2.
  const double center = front.velocity * t;
  const auto first = fields.cpd.first_site;
  const auto n_lo = static_cast<std::int64_t>(std::floor(center)) - window;
  const auto n_hi = static_cast<std::int64_t>(std::ceil(center)) + window;
  const auto size = static_cast<std::int64_t>(cpd.size());
  if (n_lo - first < 0 || n_hi - first >= size) {
    throw ConfigError("measure_edge: window leaves the lattice");
  }
  auto edge_of = [&](std::int64_t n) { return static_cast<double>(n) + 0.5; };
  auto at = [&](const std::vector<double>& v, std::int64_t n) {
    return v[static_cast<std::size_t>(n - first)];
  };
  // Reference values at the continuum front position.
  const auto below = static_cast<std::int64_t>(std::floor(center - 0.5));
  const double w = center - edge_of(below);
  const double cpd_ref = (1.0 - w) * at(cpd, below) + w * at(cpd, below + 1);
  const double ccd_ref = (1.0 - w) * at(ccd, below) + w * at(ccd, below + 1);

  const double s = out.scale;
  const int dir = out.direction;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    out.xi.push_back(dir * (edge_of(n) - center) / s);
    out.dphi_scaled.push_back(dir * s * (at(cpd, n) - cpd_ref));
    out.dj_scaled.push_back(dir * s * (at(ccd, n) - ccd_ref));
  }
  if (dir < 0) {
    std::reverse(out.xi.begin(), out.xi.end());
    std::reverse(out.dphi_scaled.begin(), out.dphi_scaled.end());
    std::reverse(out.dj_scaled.begin(), out.dj_scaled.end());
  }
  return out;
}

EdgeProfile measure_edge(const WalkParams& p, const ExtremalFront& front, double t, long window) {
  const auto diagram = cone_topology(p);
  const auto wf = evolve(p, t);
  return measure_edge(CumulativeFields::from(wf), diagram, front, window);
}

std::vector<StaircaseStep> extract_staircase(const EdgeProfile& profile, StaircaseSource source,
                                             double prominence) {
  // Allowed side only.
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    if (profile.xi[i] < 0.0) continue;
    x.push_back(profile.xi[i]);
    y.push_back(source == StaircaseSource::probability
                    ? profile.dphi_scaled[i]
                    : profile.dj_scaled[i] / profile.front.velocity);
  }
  if (x.size() < 8) return {};
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-6 * std::max(1.0, h)) {
      throw std::invalid_argument("extract_staircase: profile must be uniformly sampled");
    }
  }

  const auto d = smoothed_derivative(y, h);
  if (!(*std::max_element(d.begin(), d.end()) > 0.0)) return {};

  // Alternating maxima (risers) and minima (plateaus), starting with a riser.
  // An extremum is confirmed once the derivative moves away from it by
  // `prominence` times the height of the latest riser.
  std::vector<double> risers;
  std::vector<double> plateaus;
  bool want_max = true;
  std::size_t best = 0;
  double last_peak = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (want_max) {
      if (d[i] > d[best]) best = i;
      if (d[best] > 0.0 && d[i] < (1.0 - prominence) * d[best]) {
        risers.push_back(refine_extremum(d, best));
        last_peak = d[best];
        want_max = false;
        best = i;
      }
    } else {
      if (d[i] < d[best]) best = i;
      if (d[i] > d[best] + prominence * last_peak) {
        plateaus.push_back(refine_extremum(d, best));
        want_max = true;
        best = i;
      }
    }
  }

  std::vector<StaircaseStep> steps;
  for (std::size_t m = 0; m < plateaus.size() && m + 1 < risers.size(); ++m) {
    StaircaseStep st;
    st.index = static_cast<int>(m) + 1;
    st.position = x.front() + plateaus[m] * h;
    st.height = sample_at(y, plateaus[m]);
    st.width = (risers[m + 1] - risers[m]) * h;
    st.area = st.height * st.width;
    steps.push_back(st);
  }
  if (steps.size() < 2) return {};
  return steps;
}

}  // namespace qwalk
