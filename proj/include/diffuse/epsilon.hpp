#pragma once

#include "diffuse/kernels.hpp"

namespace diffuse {

struct EpsilonGrid {
  double log_min = 0.0; // natural log of the smallest scale
  double log_max = 0.0;
  int steps = 64;
};

/// Default grid: 64 log-spaced scales from 1e-3 * median positive squared
/// distance up to 1e3 * max squared distance.
EpsilonGrid default_epsilon_grid(const Matrix& sq_dist);

struct EpsilonScan {
  Vector log_eps;  // strictly increasing grid (natural log)
  Vector log_S;    // log of the kernel sum at each scale
  Vector slope;    // discrete d(log S)/d(log eps); one-sided at the ends
  double chosen_epsilon = 0.0;
  int linear_lo = -1; // inclusive grid indices of the detected linear run
  int linear_hi = -1;
};

/// Scans the total kernel weight over a log-spaced grid of scales and picks
/// a scale from the longest near-linear section of log S vs log eps. The
/// linear section must have at least 3 points, slope deviating from its
/// run-mean by less than slope_tol, and a run-mean strictly between 0.05
/// and max_slope (which excludes the saturation plateaus at both ends).
/// Throws NoLinearRegion if no qualifying run exists.
EpsilonScan choose_epsilon(const Matrix& sq_dist, const EpsilonGrid& grid,
                           double slope_tol, double max_slope);

/// Least-squares slope of log_S against log_eps over grid indices
/// [lo, hi] inclusive.
double fit_scan_slope(const EpsilonScan& scan, int lo, int hi);

} // namespace diffuse
