#pragma once

// Root bracketing for derivatives of the dispersion on the Brillouin-zone
// circle [-pi, pi).
//
// Roots of w^(m)(q) - level are located by splitting the circle at the
// critical points of w^(m) (the roots of w^(m+1)), on which pieces the
// function is monotone and has at most one root.  The recursion bottoms out
// at a dense uniform scan of a high derivative, where the NNN harmonic
// dominates and roots are well separated.  This resolves the clustered
// roots that appear next to a Lifshitz point, which a single uniform scan of
// w'' would miss.

#include <vector>

#include "qwalk/dispersion.hpp"

namespace qwalk {

struct RootScanOptions {
  int scan_points = 4096;   // uniform grid used at the deepest level
  int max_order = 8;        // derivative order scanned directly
  double tol_value = 1e-12; // |f| below which a critical point counts as a touching root
  double tol_merge = 1e-8;  // roots closer than this (on the circle) are merged
};

// Sorted roots in [-pi, pi) of w^(m)(q) = level, m >= 1.
std::vector<double> derivative_roots(const WalkParams& p, int m, double level,
                                     const RootScanOptions& opts = {});

// Same, given the sorted critical points of w^(m) (roots of w^(m+1)).
std::vector<double> derivative_roots_between(const WalkParams& p, int m, double level,
                                             const std::vector<double>& critical,
                                             const RootScanOptions& opts = {});

}  // namespace qwalk
