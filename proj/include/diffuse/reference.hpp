#pragma once

#include "diffuse/cube.hpp"
#include "diffuse/segment.hpp"
#include "diffuse/subpixel.hpp"
#include "diffuse/video.hpp"

// Straightforward serial implementations kept as independent references
// for the parallel kernels. They share no code with the main library paths
// and favour obviousness over speed; the test suites compare against them
// and the benchmark measures the gap.
namespace diffuse::ref {

Matrix pairwise_sq_dist(const Matrix& data);

double kernel_sum(const Matrix& sq_dist, double epsilon);

Matrix wav_image(const HyperCube& cube);

/// Smallest eta whose truncated expansion reproduces P^t within delta,
/// found by recomputing the full residual from scratch for every eta.
int eta_exhaustive(const Matrix& P, const Vector& lambdas, const Matrix& nu,
                   const Matrix& mu, int time, double delta);

std::map<ColorTuple, long> histogram_counts(const std::vector<ColorTuple>& t);

std::vector<int> nearest_peak_labels(const std::vector<ColorTuple>& tuples,
                                     const std::vector<Peak>& peaks);

/// Peak extraction by repeated full scans over an explicit dense copy.
std::vector<Peak> peaks_by_scan(const std::map<ColorTuple, long>& counts,
                                int theta, int xi);

std::vector<SubPixelHit> detect_subpixel(const ReducedCube& ghat,
                                         const SubPixelParams& params);

/// Root-filtered connected components via union-find labeling.
Mask components_filter(const Mask& gray, const Mask& rgb);

/// Direct rightward scan for the gray threshold.
int scan_threshold_gray(const std::vector<double>& h, double mu);

/// Direct two-sided scan for the RGB thresholds.
std::pair<int, int> scan_threshold_rgb(const std::vector<double>& h, double mu);

} // namespace diffuse::ref
