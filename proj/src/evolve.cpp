#include "qwalk/evolve.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <fftw3.h>

#include "qwalk/errors.hpp"
#include "qwalk/fronts.hpp"

namespace qwalk {

namespace {

// fftw planning is not thread-safe; execution with the new-array API is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Neumaier summation in long double.
class CompensatedSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

long double ipow(long double x, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void require_kind(const ObservableField& f, FieldKind kind, const char* what) {
  if (f.kind != kind) throw std::invalid_argument(std::string(what) + ": wrong field kind");
}

}  // namespace

std::complex<double> WaveFunction::at(std::int64_t n) const {
  const auto L = static_cast<std::int64_t>(amps.size());
  std::int64_t i = (n - first_site()) % L;
  if (i < 0) i += L;
  return amps[static_cast<std::size_t>(i)];
}

std::size_t transform_friendly_size(std::size_t n) {
  if (n < 2) n = 2;
  for (std::size_t m = n + (n % 2);; m += 2) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u, 7u}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

std::size_t auto_lattice_size(const WalkParams& p, double t) {
  const auto diagram = cone_topology(p);
  const double vmax = std::max(std::abs(diagram.v_lm), std::abs(diagram.v_rm));
  // The forbidden-side tail of the outermost fronts spans ~10 edge scales
  // before dropping below the guard threshold.
  double tail = 10.0 * std::cbrt(t);
  for (const auto& f : diagram.fronts) {
    if (std::abs(f.velocity) >= vmax - 1e-9) {
      tail = std::max(tail, 12.0 * std::pow(std::abs(f.kappa) * t, 1.0 / (f.order + 2)));
    }
  }
  const double half = std::ceil(vmax * t + 40.0 + tail);
  return transform_friendly_size(2 * static_cast<std::size_t>(half));
}

void check_tail_guard(const WaveFunction& wf, int sites, double tol) {
  const std::size_t L = wf.size();
  const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(sites), L / 2);
  for (std::size_t i = 0; i < width; ++i) {
    const double left = std::abs(wf.amps[i]);
    const double right = std::abs(wf.amps[L - 1 - i]);
    if (left >= tol || right >= tol) {
      throw GuardViolation("wraparound guard: |psi| = " + std::to_string(std::max(left, right)) +
                           " near the ring seam at t = " + std::to_string(wf.t) +
                           " (L = " + std::to_string(L) + ")");
    }
  }
}

WaveFunction evolve(const WalkParams& p, double t, const EvolveOptions& opts) {
  p.validate();
  if (!std::isfinite(t) || t < 0.0) throw ConfigError("evolve: t must be finite and >= 0");

  std::size_t L = 0;
  if (opts.lattice) {
    L = *opts.lattice;
    if (L < 4 || L % 2 != 0) throw ConfigError("evolve: lattice size must be even and >= 4");
    if (opts.enforce_guard) {
      const auto diagram = cone_topology(p);
      const double vmax = std::max(std::abs(diagram.v_lm), std::abs(diagram.v_rm));
      if (static_cast<double>(L / 2) < vmax * t + 10.0) {
        throw ConfigError("evolve: lattice of " + std::to_string(L) +
                          " sites is smaller than the causal cone at t = " + std::to_string(t));
      }
    }
  } else {
    L = auto_lattice_size(p, t);
  }

  std::vector<std::complex<double>> spectrum(L);
  std::vector<std::complex<double>> ring(L);
  const double invL = 1.0 / static_cast<double>(L);
  for (std::size_t j = 0; j < L; ++j) {
    const double q = kTwoPi * static_cast<double>(j) * invL;
    spectrum[j] = std::polar(invL, -omega(q, p) * t);
  }

  auto* in = reinterpret_cast<fftw_complex*>(spectrum.data());
  auto* out = reinterpret_cast<fftw_complex*>(ring.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(L), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute_dft(plan, in, out);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  WaveFunction wf;
  wf.params = p;
  wf.t = t;
  wf.amps.resize(L);
  // ring[k] holds site n = k (mod L); amps[i] holds site i - L/2.
  const std::size_t half = L / 2;
  for (std::size_t i = 0; i < L; ++i) wf.amps[i] = ring[(i + half) % L];

  if (opts.enforce_guard) check_tail_guard(wf);
  return wf;
}

ObservableField probability_density(const WaveFunction& wf) {
  ObservableField f;
  f.kind = FieldKind::probability;
  f.t = wf.t;
  f.params = wf.params;
  f.first_site = wf.first_site();
  f.values.resize(wf.size());
  for (std::size_t i = 0; i < wf.size(); ++i) f.values[i] = std::norm(wf.amps[i]);
  return f;
}

ObservableField current_density(const WaveFunction& wf) {
  const std::size_t L = wf.size();
  const std::complex<double> I{0.0, 1.0};
  const std::complex<double> phase = std::polar(1.0, wf.params.phi);
  const double g = wf.params.g;

  ObservableField f;
  f.kind = FieldKind::current;
  f.t = wf.t;
  f.params = wf.params;
  f.first_site = wf.first_site();
  f.values.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    const auto& psi = wf.amps[i];
    const auto& psi1 = wf.amps[(i + L - 1) % L];
    const auto& psi2 = wf.amps[(i + L - 2) % L];
    const std::complex<double> j =
        I * (std::conj(psi1) * psi - std::conj(psi) * psi1) +
        2.0 * I * g * (phase * std::conj(psi2) * psi - std::conj(phase) * std::conj(psi) * psi2);
    if (std::abs(j.imag()) > 1e-8) {
      throw std::logic_error("current_density: imaginary residue " + std::to_string(j.imag()));
    }
    f.values[i] = j.real();
  }
  return f;
}

ObservableField cumulative(const ObservableField& f) {
  ObservableField out = f;
  if (f.kind == FieldKind::probability) {
    out.kind = FieldKind::cumulative_probability;
  } else if (f.kind == FieldKind::current) {
    out.kind = FieldKind::cumulative_current;
  } else {
    throw std::invalid_argument("cumulative: expects a probability or current field");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    acc.add(f.values[i]);
    out.values[i] = static_cast<double>(acc.value());
  }
  return out;
}

double position_moment(const ObservableField& prob, int k) {
  require_kind(prob, FieldKind::probability, "position_moment");
  if (k < 0) throw std::invalid_argument("position_moment: k must be >= 0");
  CompensatedSum acc;
  for (std::size_t i = 0; i < prob.values.size(); ++i) {
    acc.add(ipow(static_cast<long double>(prob.site(i)), k) * prob.values[i]);
  }
  return static_cast<double>(acc.value());
}

ObservableField cumulative_moment(const ObservableField& prob, int k) {
  require_kind(prob, FieldKind::probability, "cumulative_moment");
  if (k < 0) throw std::invalid_argument("cumulative_moment: k must be >= 0");
  ObservableField out = prob;
  out.kind = FieldKind::cumulative_moment;
  out.moment_order = k;
  CompensatedSum acc;
  for (std::size_t i = 0; i < prob.values.size(); ++i) {
    acc.add(ipow(static_cast<long double>(prob.site(i)), k) * prob.values[i]);
    out.values[i] = static_cast<double>(acc.value());
  }
  return out;
}

double skewness(const ObservableField& prob) {
  const double mu2 = position_moment(prob, 2);
  if (!(mu2 > 0.0)) throw std::domain_error("skewness: second moment vanishes (t = 0?)");
  return position_moment(prob, 3) / std::pow(mu2, 1.5);
}

}  // namespace qwalk
