#pragma once

// Edge profiles near extremal fronts: generalized-Airy predictions, numeric
// measurements from evolved states, and staircase extraction.

#include <span>
#include <vector>

#include "qwalk/airy.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/fronts.hpp"

namespace qwalk {

enum class ProfileSource { numeric, predicted };

// Scaled deviation profile near a front. The coordinate x = xi[i] is oriented
// so that x > 0 points into the allowed region:
//   x = dir * (n_edge - v_e t) / s,   s = (|kappa_k| t)^{1/(k+2)},
// with dir = +1 when v has a minimum at the front (allowed side n > v_e t)
// and -1 at a maximum. dphi_scaled = dir * s * (Phi(n) - Phi(v_e t)) is then
// non-decreasing in x; dj_scaled is built the same way from the cumulative
// current and approaches v_e * dphi_scaled.
struct EdgeProfile {
  ExtremalFront front;
  double t = 0.0;
  double scale = 1.0;     // s
  int direction = 1;      // dir
  int multiplicity = 1;   // number of fronts sharing v_e
  std::vector<double> xi;
  std::vector<double> dphi_scaled;
  std::vector<double> dj_scaled;
  ProfileSource source = ProfileSource::predicted;
};

// Allowed-side orientation and scale of a front (odd orders only).
int front_direction(const ExtremalFront& front);
double edge_scale(const ExtremalFront& front, double t);

// multiplicity * int_0^x A_k(-y)^2 dy on the given grid, dj = v_e * dphi.
// Throws std::invalid_argument for even-order fronts (no real staircase).
EdgeProfile predict_edge(const ExtremalFront& front, double t, std::span<const double> xi_grid,
                         int multiplicity = 1);

// Numeric profile within +-window sites of v_e t. Degenerate partners (same
// velocity, different q*) set the multiplicity; their interference ripple of
// period 2 pi / |dq| sites is removed by a moving average. Throws ConfigError
// when the window reaches another front.
EdgeProfile measure_edge(const WalkParams& p, const ExtremalFront& front, double t, long window);

// Staircase of a scaled deviation profile. Plateaus sit at the zeros of the
// profile derivative; risers are the non-stationary inflection points
// (maxima of the derivative). Step m spans the risers on either side of
// plateau m.
struct StaircaseStep {
  int index = 0;          // 1 = closest to the front
  double position = 0.0;  // plateau location in x
  double height = 0.0;    // profile value on the plateau
  double width = 0.0;     // distance between the risers around the plateau
  double area = 0.0;      // height * width
};

enum class StaircaseSource { probability, current };

// Current profiles are divided by v_e before extraction. `prominence` is
// relative to the height of the preceding riser.
// Returns an empty
// vector when fewer than two steps can be resolved.
std::vector<StaircaseStep> extract_staircase(const EdgeProfile& profile,
                                             StaircaseSource source = StaircaseSource::probability,
                                             double prominence = 0.2);

// Cumulative probability and current of one evolved state, shared by several
// edge measurements.
struct CumulativeFields {
  ObservableField cpd;
  ObservableField ccd;
  static CumulativeFields from(const WaveFunction& wf);
};

EdgeProfile measure_edge(const CumulativeFields& fields, const FrontDiagram& diagram,
                         const ExtremalFront& front, long window);

}  // namespace qwalk
