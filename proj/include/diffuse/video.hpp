#pragma once

#include "diffuse/spectral.hpp"

#include <array>
#include <vector>

namespace diffuse {

using Mask = Eigen::MatrixXi; // 0 = background, 1 = foreground

/// Frame sequence, grayscale (1 plane) or RGB (3 planes), uniform shape.
struct FrameSequence {
  int rows = 0;
  int cols = 0;
  int channels = 1;
  std::vector<std::vector<Matrix>> frames; // frames[t][channel]

  int size() const { return static_cast<int>(frames.size()); }
};

void check_sequence(const FrameSequence& seq);
FrameSequence gray_view(const FrameSequence& rgb); // Rec.601 luma
std::vector<Matrix> gray_planes(const FrameSequence& seq);

/// Background estimate for one window: the first diffusion-basis
/// projection of the hyper-pixels, raw (`bg`) and min-max scaled to
/// [0,255] (`bg_norm`). Constant estimates are clamped into [0,255]
/// instead of stretched.
struct BackgroundModel {
  Matrix bg;
  Matrix bg_norm;
  int window_lo = 0;
  int window_hi = 0;
  bool converged = true;
  int iterations = 1;
};

Matrix normalize_0_255(const Matrix& m);

struct ThresholdParams {
  double mu = 0.0;         // 0 = auto: 0.5% of the smoothed peak height
  int smoothing_width = 5; // moving-average width (odd)
};

struct SbsdbOptions {
  int window = 5;
  ThresholdParams thr;
  EpsilonSpec epsilon = AutoMedian{};
  double delta = 1e-3;
  EmbeddingKind variant = EmbeddingKind::DB;
};

/// Incrementally maintained affinity over the frame-vectors of a sliding
/// window: when the window advances, only the arriving frame's distances
/// are computed and the departed frame's row/column is dropped.
class SlidingWindowKernel {
public:
  SlidingWindowKernel(const std::vector<Matrix>& frames, int first, int window);
  void slide(const Matrix& incoming);

  const Matrix& sq_dist() const { return sq_dist_; }

private:
  std::vector<Vector> window_; // flattened frame-vectors, window order
  Matrix sq_dist_;
};

/// Background of one window of grayscale frames.
BackgroundModel capture_static_background(const std::vector<Matrix>& window,
                                          const EpsilonSpec& epsilon,
                                          double delta,
                                          EmbeddingKind variant = EmbeddingKind::DB);

/// Per-frame sliding-window backgrounds for the whole sequence; the last
/// window-1 frames reuse the final window's background.
std::vector<Matrix> sbsdb_backgrounds(const std::vector<Matrix>& frames,
                                      const SbsdbOptions& options);

/// Background-subtracted sequence (negatives zeroed), no thresholding.
std::vector<Matrix> sbsdb_subtract(const std::vector<Matrix>& frames,
                                   const SbsdbOptions& options);

/// Full static-background pipeline: sliding-window background capture,
/// subtraction, histogram threshold, binary mask per frame.
std::vector<Mask> sbsdb(const std::vector<Matrix>& frames,
                        const SbsdbOptions& options);

// Histogram utilities (256 bins over [0,255]).
std::array<double, 256> histogram256(const Matrix& frame);
std::vector<double> smooth_histogram(const std::array<double, 256>& h,
                                     int width);
double resolve_mu(const std::vector<double>& smoothed, double mu);

struct GrayThreshold {
  int th = 0;
  bool saturated = false; // no qualifying bin; last bin returned
};

/// Scans the smoothed histogram rightward from the bin after its global
/// maximum and returns the first bin whose central-difference slope has
/// magnitude below mu.
GrayThreshold gray_threshold(const std::vector<double>& smoothed, double mu);

struct RgbThresholds {
  int lo = 0; // first bin left of the peak with h' < mu  (-1: none)
  int hi = 0; // first bin right of the peak with h' > -mu (256: none)
};

RgbThresholds rgb_threshold(const std::vector<double>& smoothed, double mu);

/// Iterative dynamic-background capture: repeatedly estimates a static
/// background over the whole sequence, subtracts it (zeroing negatives)
/// and accumulates, until `stop_fraction` of the pixels are non-positive
/// or max_iters is reached (`converged` reports which).
BackgroundModel capture_dynamic_background(const std::vector<Matrix>& bgd,
                                           double stop_fraction = 0.99,
                                           int max_iters = 10,
                                           const EpsilonSpec& epsilon = AutoMedian{},
                                           double delta = 1e-3);

/// Union of the 8-connected components of the rgb foreground that contain
/// at least one gray foreground pixel.
Mask dfs_combine(const Mask& gray, const Mask& rgb);

struct DbsdbOptions {
  SbsdbOptions sbsdb;
  double stop_fraction = 0.99;
  int max_iters = 10;
};

/// Dynamic-background pipeline over RGB training (bgd) and classification
/// (rtd) sequences; returns one binary mask per rtd frame.
std::vector<Mask> dbsdb(const FrameSequence& rtd, const FrameSequence& bgd,
                        const DbsdbOptions& options);

} // namespace diffuse
