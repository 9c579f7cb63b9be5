#pragma once

// Exact evolution of a particle initially localized at the origin on a
// periodic ring of L sites, and the site-resolved observables built from it.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qwalk/dispersion.hpp"

namespace qwalk {

struct WaveFunction {
  WalkParams params;
  double t = 0.0;
  // amps[i] is the amplitude at site n = i - L/2, so n ranges over [-L/2, L/2).
  std::vector<std::complex<double>> amps;

  [[nodiscard]] std::size_t size() const { return amps.size(); }
  [[nodiscard]] std::int64_t first_site() const { return -static_cast<std::int64_t>(amps.size() / 2); }
  // Periodic access by site label.
  [[nodiscard]] std::complex<double> at(std::int64_t n) const;
};

enum class FieldKind {
  probability,
  current,
  cumulative_probability,
  cumulative_current,
  cumulative_moment,
};

struct ObservableField {
  FieldKind kind = FieldKind::probability;
  int moment_order = 0;  // only meaningful for cumulative_moment
  std::vector<double> values;
  double t = 0.0;
  WalkParams params;
  std::int64_t first_site = 0;

  [[nodiscard]] std::int64_t site(std::size_t i) const { return first_site + static_cast<std::int64_t>(i); }
};

struct EvolveOptions {
  std::optional<std::size_t> lattice;  // site count; chosen from the causal cone when empty
  bool enforce_guard = true;           // reject states with weight near the ring seam
};

// Smallest even 7-smooth integer >= n.
std::size_t transform_friendly_size(std::size_t n);

// 2 * ceil(v_max t + 40 + tail) rounded up to a transform-friendly size, with
// v_max the largest front speed and tail = max(10 t^(1/3), 12 (|kappa| t)^(1/(k+2)))
// over the outermost fronts.
std::size_t auto_lattice_size(const WalkParams& p, double t);

// psi(n, t) = (1/L) sum_j exp(i q_j n - i w(q_j) t), q_j = 2 pi j / L.
// Throws ConfigError for t < 0, odd or too small L; GuardViolation when the
// amplitude within 10 sites of the seam exceeds 1e-10 and the guard is on.
WaveFunction evolve(const WalkParams& p, double t, const EvolveOptions& opts = {});

// Throws GuardViolation if |psi| >= tol within `sites` of either ring edge.
void check_tail_guard(const WaveFunction& wf, int sites = 10, double tol = 1e-10);

ObservableField probability_density(const WaveFunction& wf);

// j(n) = i[psi*(n-1) psi(n) - psi*(n) psi(n-1)]
//      + 2ig[e^{i phi} psi*(n-2) psi(n) - e^{-i phi} psi*(n) psi(n-2)]
ObservableField current_density(const WaveFunction& wf);

// Running sum from the left ring edge. Accepts probability or current fields.
ObservableField cumulative(const ObservableField& f);

// mu_k = sum_n n^k p(n), compensated.
double position_moment(const ObservableField& prob, int k);

// M_k(n) = sum_{m <= n} m^k p(m).
ObservableField cumulative_moment(const ObservableField& prob, int k);

// mu_3 / mu_2^{3/2}. Throws std::domain_error when mu_2 == 0.
double skewness(const ObservableField& prob);

}  // namespace qwalk
