#pragma once

#include "diffuse/cube.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace diffuse {

using ColorTuple = std::vector<int>;

/// Sparse frequency table over quantised color tuples. The ordered map
/// makes peak extraction deterministic: count ties resolve to the
/// lexicographically smallest tuple.
struct ColorHistogram {
  std::map<ColorTuple, long> counts;
  long total = 0;
};

ColorHistogram build_histogram(const QuantizedCube& q);
ColorHistogram build_histogram(const std::vector<ColorTuple>& tuples);

struct Peak {
  ColorTuple color;
  long count = 0;
};

struct PeakSet {
  std::vector<Peak> peaks; // counts nonincreasing
  int requested = 0;       // theta
  int xi = 0;
  bool shortfall = false; // histogram exhausted before theta peaks
};

/// Iteratively pulls the highest histogram bin, then zeroes every bin
/// within L-infinity distance xi of it, until theta peaks are found or the
/// histogram is exhausted.
PeakSet peaks_finder(const ColorHistogram& hist, int theta, int xi);

struct SegmentationMap {
  Eigen::MatrixXi labels; // 1..|peaks|; 0 marks pixels outside the selection
  std::vector<Peak> peaks;
  std::vector<std::array<std::uint8_t, 3>> palette; // palette[label-1]
};

/// Deterministic 16-color cycle indexed by label.
std::array<std::uint8_t, 3> palette_color(int label);

/// Labels every pixel with the index of the Euclidean-nearest peak
/// (ties go to the lowest peak index).
SegmentationMap segment_by_colors(const QuantizedCube& q, const PeakSet& peaks);
std::vector<int> nearest_peak_labels(const std::vector<ColorTuple>& tuples,
                                     const PeakSet& peaks);

struct WwgParams {
  ReduceOptions reduce;
  int theta = 8;
  int xi = 7;
  int levels = 32;
  bool drop_first_color = false; // reproduce the eta(delta)-1 reading
};

struct WwgResult {
  ReducedCube reduced;
  ReducedCube normalized;
  QuantizedCube quantized;
  ColorHistogram histogram;
  PeakSet peaks;
  SegmentationMap seg;
};

/// Two-phase segmentation: diffusion-bases reduction followed by
/// histogram-peak clustering of the quantised colors.
WwgResult wwg(const HyperCube& cube, const WwgParams& params);

/// Re-runs the reduction and the color clustering on the original
/// hyper-pixels of one chosen segment. Pixels outside the segment get
/// label 0 in the returned map.
SegmentationMap drill_down(const HyperCube& cube, const SegmentationMap& seg,
                           int chi, const WwgParams& params);

} // namespace diffuse
