#pragma once

// Bulk (ballistic) scaling functions on nu = n / t. Each one is an integral
// over the sub-level set {q : v(q) <= nu} of the group velocity v = w'.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qwalk/dispersion.hpp"
#include "qwalk/fronts.hpp"

namespace qwalk {

// Caches the critical points of v (the extremal fronts) so that level sets
// can be bracketed on monotone arcs.
class HydroModel {
 public:
  explicit HydroModel(const WalkParams& p, const FrontOptions& opts = {});

  [[nodiscard]] const WalkParams& params() const { return params_; }
  [[nodiscard]] const FrontDiagram& diagram() const { return diagram_; }

  // Solutions of v(q) = nu in [-pi, pi), sorted; tangencies appear once.
  [[nodiscard]] std::vector<double> invert_velocity(double nu) const;

  // Arcs [a, b] (a < b, b possibly beyond pi) on which v <= nu.
  [[nodiscard]] std::vector<std::pair<double, double>> sublevel_arcs(double nu) const;

  [[nodiscard]] double cpd(double nu) const;                              // Phi(nu)
  [[nodiscard]] double ccd(double nu) const;                              // J(nu)
  [[nodiscard]] double moment(double nu, int k, double tol = 1e-11) const;  // M~_k(nu)

  // Velocity at which Phi crosses 1/2.
  [[nodiscard]] double half_probability_velocity() const;

 private:
  WalkParams params_;
  FrontDiagram diagram_;
  std::vector<double> critical_;
};

std::vector<double> invert_velocity(const WalkParams& p, double nu, double tol = 1e-13);
double scaled_cpd(const WalkParams& p, double nu);
double scaled_ccd(const WalkParams& p, double nu);
// (1/2pi) int_{v <= nu} v^k dq by adaptive Gauss-Kronrod, k >= 1.
double scaled_moment(const WalkParams& p, double nu, int k, double tol = 1e-9);

struct ScalingCurve {
  WalkParams params;
  std::vector<double> nu;
  std::vector<double> phi_scaled;
  std::vector<double> j_scaled;
  std::vector<std::vector<double>> m_scaled;  // k = 1, 2, 3
};

ScalingCurve scaling_curve(const WalkParams& p, std::size_t samples = 4001, double margin = 0.5);

struct Deviation {
  double sup_outside = 0.0;
  double l1_outside = 0.0;  // sum |d| / t over sites outside the windows
  double sup_inside = 0.0;
};

struct ExclusionWindow {
  double velocity = 0.0;
  int order = 1;
  double center = 0.0;      // v_e t
  double half_width = 0.0;  // c (|kappa_k| t)^{1/(k+2)} sites
};

struct Kink {
  double nu = 0.0;
  double slope_left_numeric = 0.0;
  double slope_right_numeric = 0.0;
  double slope_left_hydro = 0.0;
  double slope_right_hydro = 0.0;
};

// Per-site comparison row. nu is evaluated at the cell edge (n + 1/2) / t,
// which is where the inclusive prefix sums live.
struct BulkRow {
  std::int64_t n = 0;
  double nu = 0.0;
  double phi_num = 0.0, phi_hydro = 0.0;
  double j_num = 0.0, j_hydro = 0.0;
  double m_num[3] = {0.0, 0.0, 0.0};
  double m_hydro[3] = {0.0, 0.0, 0.0};
  bool excluded = false;
};

struct BulkReport {
  WalkParams params;
  double t = 0.0;
  std::size_t lattice = 0;
  double window_factor = 8.0;
  std::vector<ExclusionWindow> windows;
  Deviation phi, j;
  Deviation m[3];
  std::vector<Kink> kinks;  // at internal fronts
  double nu_half_hydro = 0.0;
  double nu_half_numeric = 0.0;
  std::vector<BulkRow> rows;  // only filled when requested
};

struct BulkOptions {
  double window_factor = 8.0;
  std::optional<std::size_t> lattice;
  bool keep_rows = false;
  bool with_moments = true;
};

// Evolves to time t and compares the numerical cumulative fields against the
// hydrodynamic predictions, excluding windows around each extremal front.
BulkReport compare_bulk(const WalkParams& p, double t, const BulkOptions& opts = {});

}  // namespace qwalk
