#pragma once

// Extremal fronts: wave-vectors where the group velocity w'(q) is stationary.
// A front has order k when w'' .. w^(k+1) vanish there and w^(k+2) does not.

#include <string_view>
#include <vector>

#include "qwalk/dispersion.hpp"

namespace qwalk {

enum class Chirality { left, right };

struct ExtremalFront {
  double q_star = 0.0;
  double velocity = 0.0;  // w'(q_star)
  int order = 1;          // k
  double kappa = 0.0;     // w^(k+2)(q_star) / (k+1)!
  Chirality chirality = Chirality::right;
};

enum class ConeTopology {
  OneCone,
  TwoNestedCones,
  TwoOverlappingCones,
  CriticalSecondOrder,
  CriticalThirdOrder,
};

std::string_view to_string(ConeTopology t);
std::string_view to_string(Chirality c);

struct FrontDiagram {
  WalkParams params;
  std::vector<ExtremalFront> fronts;  // sorted by velocity
  double v_lm = 0.0;
  double v_rm = 0.0;
  ConeTopology topology = ConeTopology::OneCone;

  // Fronts sharing `velocity` within tol_degen (the degenerate partners of a front).
  [[nodiscard]] std::vector<ExtremalFront> fronts_at(double velocity, double tol_degen = 1e-9) const;
};

struct FrontOptions {
  double tol_root = 1e-12;
  double tol_order = 1e-8;
  double tol_degen = 1e-9;
  int scan_points = 4096;
  int max_order = 6;  // highest k tried before giving up on classification
};

// All roots of w''(q) = 0 in [-pi, pi), classified by order. Throws
// GuardViolation when a root cannot be classified up to opts.max_order.
std::vector<ExtremalFront> find_extremal_fronts(const WalkParams& p, const FrontOptions& opts = {});

// g at which the number of fronts changes from 2 to 4, for 0 <= phi <= pi/2.
double critical_coupling(double phi, double tol_g = 1e-6, const FrontOptions& opts = {});

FrontDiagram cone_topology(const WalkParams& p, const FrontOptions& opts = {});

// Real roots y = cos q, |y| <= 1, of the quartic obtained by writing
// w''(q) = 0 in terms of y and squaring away sin q. Requires g > 0.
std::vector<double> quartic_crosscheck(const WalkParams& p);

struct QuarticComparison {
  std::vector<double> quartic_roots;
  std::vector<double> front_cosines;  // cos q* of the bracketed fronts
  std::vector<double> unmatched;      // front cosines missing from the quartic set
  std::vector<double> spurious;       // quartic roots with no front (squaring artefacts)
};

QuarticComparison compare_quartic(const WalkParams& p, double tol = 1e-6, const FrontOptions& opts = {});

}  // namespace qwalk
