#include "diffuse/epsilon.hpp"

#include "diffuse/errors.hpp"

#include <cmath>

namespace diffuse {

EpsilonGrid default_epsilon_grid(const Matrix& sq_dist) {
  const double med = median_positive_sq_dist(sq_dist);
  const double mx = sq_dist.maxCoeff();
  if (med <= 0.0 || mx <= 0.0)
    throw NoLinearRegion(); // all points coincide; no usable scale range
  EpsilonGrid grid;
  grid.log_min = std::log(1e-3 * med);
  grid.log_max = std::log(1e3 * mx);
  grid.steps = 64;
  return grid;
}

EpsilonScan choose_epsilon(const Matrix& sq_dist, const EpsilonGrid& grid,
                           double slope_tol, double max_slope) {
  if (grid.steps < 8)
    throw Error("InvalidInput", "epsilon grid needs at least 8 steps");
  if (!(grid.log_max > grid.log_min))
    throw Error("InvalidInput", "epsilon grid range is empty");

  const int n = grid.steps;
  EpsilonScan scan;
  scan.log_eps.resize(n);
  scan.log_S.resize(n);
  scan.slope.resize(n);

  const double step = (grid.log_max - grid.log_min) / (n - 1);
  for (int i = 0; i < n; ++i) scan.log_eps(i) = grid.log_min + i * step;
  for (int i = 0; i < n; ++i)
    scan.log_S(i) = std::log(kernel_sum(sq_dist, std::exp(scan.log_eps(i))));

  auto diff = [&](int a, int b) {
    return (scan.log_S(b) - scan.log_S(a)) / (scan.log_eps(b) - scan.log_eps(a));
  };
  scan.slope(0) = diff(0, 1);
  scan.slope(n - 1) = diff(n - 2, n - 1);
  for (int i = 1; i < n - 1; ++i) scan.slope(i) = diff(i - 1, i + 1);

  // Longest contiguous run (>= 3 points) whose slopes stay within
  // slope_tol of the run mean, with the mean inside (0.05, max_slope).
  // Ties resolved toward the earliest run. Brute force; the grid is small.
  int best_lo = -1, best_hi = -1;
  for (int lo = 0; lo < n; ++lo) {
    for (int hi = lo + 2; hi < n; ++hi) {
      double mean = 0.0;
      for (int i = lo; i <= hi; ++i) mean += scan.slope(i);
      mean /= (hi - lo + 1);
      if (!(mean > 0.05 && mean < max_slope)) continue;
      bool ok = true;
      for (int i = lo; i <= hi && ok; ++i)
        if (std::abs(scan.slope(i) - mean) >= slope_tol) ok = false;
      if (ok && (hi - lo) > (best_hi - best_lo)) {
        best_lo = lo;
        best_hi = hi;
      }
    }
  }
  if (best_lo < 0) throw NoLinearRegion();

  scan.linear_lo = best_lo;
  scan.linear_hi = best_hi;
  scan.chosen_epsilon = std::exp(scan.log_eps((best_lo + best_hi) / 2));
  return scan;
}

double fit_scan_slope(const EpsilonScan& scan, int lo, int hi) {
  const int len = hi - lo + 1;
  double mx = 0.0, my = 0.0;
  for (int i = lo; i <= hi; ++i) {
    mx += scan.log_eps(i);
    my += scan.log_S(i);
  }
  mx /= len;
  my /= len;
  double sxy = 0.0, sxx = 0.0;
  for (int i = lo; i <= hi; ++i) {
    sxy += (scan.log_eps(i) - mx) * (scan.log_S(i) - my);
    sxx += (scan.log_eps(i) - mx) * (scan.log_eps(i) - mx);
  }
  return sxy / sxx;
}

} // namespace diffuse
