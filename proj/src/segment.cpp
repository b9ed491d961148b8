#include "diffuse/segment.hpp"

#include "diffuse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diffuse {

namespace {

std::vector<ColorTuple> cube_tuples(const QuantizedCube& q) {
  const long pixels = static_cast<long>(q.rows) * q.cols;
  std::vector<ColorTuple> tuples(static_cast<size_t>(pixels));
#pragma omp parallel for schedule(static)
  for (long p = 0; p < pixels; ++p) {
    const int i = static_cast<int>(p / q.cols);
    const int j = static_cast<int>(p % q.cols);
    ColorTuple t(static_cast<size_t>(q.colors()));
    for (int k = 0; k < q.colors(); ++k)
      t[static_cast<size_t>(k)] = q.layers[static_cast<size_t>(k)](i, j);
    tuples[static_cast<size_t>(p)] = std::move(t);
  }
  return tuples;
}

} // namespace

ColorHistogram build_histogram(const std::vector<ColorTuple>& tuples) {
  ColorHistogram hist;
  for (const ColorTuple& t : tuples) ++hist.counts[t];
  hist.total = static_cast<long>(tuples.size());
  return hist;
}

ColorHistogram build_histogram(const QuantizedCube& q) {
  return build_histogram(cube_tuples(q));
}

namespace {

bool within_linf(const ColorTuple& a, const ColorTuple& b, int radius) {
  for (size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > radius) return false;
  return true;
}

} // namespace

PeakSet peaks_finder(const ColorHistogram& hist, int theta, int xi) {
  if (theta < 1) throw Error("InvalidInput", "theta must be >= 1");
  if (xi < 0) throw Error("InvalidInput", "xi must be >= 0");

  // Working copy as a vector; bins are zeroed in place. The map order is
  // lexicographic, which gives the tie rule for free.
  std::vector<std::pair<ColorTuple, long>> bins(hist.counts.begin(),
                                                hist.counts.end());
  PeakSet out;
  out.requested = theta;
  out.xi = xi;

  while (static_cast<int>(out.peaks.size()) < theta) {
    long best = 0;
    size_t best_idx = 0;
    for (size_t b = 0; b < bins.size(); ++b) {
      if (bins[b].second > best) {
        best = bins[b].second;
        best_idx = b;
      }
    }
    if (best <= 0) break; // exhausted
    out.peaks.push_back({bins[best_idx].first, best});
    for (auto& bin : bins)
      if (within_linf(bin.first, bins[best_idx].first, xi)) bin.second = 0;
  }
  out.shortfall = static_cast<int>(out.peaks.size()) < theta;
  return out;
}

std::array<std::uint8_t, 3> palette_color(int label) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 16> kCycle = {{
      {230, 25, 75},   {60, 180, 75},   {255, 225, 25}, {0, 130, 200},
      {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230},
      {210, 245, 60},  {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
      {170, 110, 40},  {255, 250, 200}, {128, 0, 0},    {128, 128, 128},
  }};
  return kCycle[static_cast<size_t>((label - 1) % 16)];
}

std::vector<int> nearest_peak_labels(const std::vector<ColorTuple>& tuples,
                                     const PeakSet& peaks) {
  if (peaks.peaks.empty())
    throw Error("InvalidInput", "need at least one peak");
  std::vector<int> labels(tuples.size());
#pragma omp parallel for schedule(static)
  for (long p = 0; p < static_cast<long>(tuples.size()); ++p) {
    const ColorTuple& c = tuples[static_cast<size_t>(p)];
    double best = std::numeric_limits<double>::infinity();
    int best_label = 1;
    for (size_t k = 0; k < peaks.peaks.size(); ++k) {
      double sq = 0.0;
      const ColorTuple& rho = peaks.peaks[k].color;
      for (size_t m = 0; m < c.size(); ++m) {
        const double diff = rho[m] - c[m];
        sq += diff * diff;
      }
      if (sq < best) { // strict: ties keep the lowest peak index
        best = sq;
        best_label = static_cast<int>(k) + 1;
      }
    }
    labels[static_cast<size_t>(p)] = best_label;
  }
  return labels;
}

SegmentationMap segment_by_colors(const QuantizedCube& q,
                                  const PeakSet& peaks) {
  const std::vector<int> flat = nearest_peak_labels(cube_tuples(q), peaks);
  SegmentationMap out;
  out.labels.resize(q.rows, q.cols);
  for (int i = 0; i < q.rows; ++i)
    for (int j = 0; j < q.cols; ++j)
      out.labels(i, j) = flat[static_cast<size_t>(i) * q.cols + j];
  out.peaks = peaks.peaks;
  out.palette.resize(peaks.peaks.size());
  for (size_t k = 0; k < peaks.peaks.size(); ++k)
    out.palette[k] = palette_color(static_cast<int>(k) + 1);
  return out;
}

namespace {

// Phase 2 on an arbitrary pixel list: normalise colors, quantise, build the
// histogram, find peaks, label by nearest peak.
std::pair<std::vector<int>, PeakSet> phase2_flat(const Matrix& colors,
                                                 const WwgParams& params) {
  if (params.levels < 2) throw Error("InvalidInput", "need at least 2 levels");
  Matrix used = colors;
  if (params.drop_first_color && used.cols() > 1)
    used = colors.rightCols(colors.cols() - 1);

  const Matrix ghat = normalize_columns_01(used);
  const long pixels = ghat.rows();
  std::vector<ColorTuple> tuples(static_cast<size_t>(pixels));
  for (long p = 0; p < pixels; ++p) {
    ColorTuple t(static_cast<size_t>(ghat.cols()));
    for (Eigen::Index k = 0; k < ghat.cols(); ++k) {
      int v = static_cast<int>(std::floor(params.levels * ghat(p, k)));
      v = std::clamp(v, 1, params.levels);
      t[static_cast<size_t>(k)] = v;
    }
    tuples[static_cast<size_t>(p)] = std::move(t);
  }

  const ColorHistogram hist = build_histogram(tuples);
  const PeakSet peaks = peaks_finder(hist, params.theta, params.xi);
  return {nearest_peak_labels(tuples, peaks), peaks};
}

} // namespace

WwgResult wwg(const HyperCube& cube, const WwgParams& params) {
  if (params.levels < 2) throw Error("InvalidInput", "need at least 2 levels");
  WwgResult out;
  out.reduced = reduce_cube(cube, params.reduce);

  if (params.drop_first_color && out.reduced.colors() > 1) {
    ReducedCube trimmed = out.reduced;
    trimmed.layers.erase(trimmed.layers.begin());
    out.normalized = normalize_layers(trimmed);
  } else {
    out.normalized = normalize_layers(out.reduced);
  }
  out.quantized = quantize(out.normalized, params.levels);
  out.histogram = build_histogram(out.quantized);
  out.peaks = peaks_finder(out.histogram, params.theta, params.xi);
  out.seg = segment_by_colors(out.quantized, out.peaks);
  return out;
}

SegmentationMap drill_down(const HyperCube& cube, const SegmentationMap& seg,
                           int chi, const WwgParams& params) {
  check_cube(cube);
  if (seg.labels.rows() != cube.rows || seg.labels.cols() != cube.cols)
    throw Error("InvalidInput", "segmentation shape does not match cube");

  std::vector<std::pair<int, int>> selected;
  for (int i = 0; i < cube.rows; ++i)
    for (int j = 0; j < cube.cols; ++j)
      if (seg.labels(i, j) == chi) selected.emplace_back(i, j);

  if (selected.empty()) throw EmptySelection(chi);
  if (selected.size() < 2)
    throw TooFewPixels(static_cast<long>(selected.size()));

  Matrix spectra(static_cast<long>(selected.size()), cube.bands());
  for (size_t p = 0; p < selected.size(); ++p)
    for (int k = 0; k < cube.bands(); ++k)
      spectra(static_cast<long>(p), k) =
          cube.band_images[static_cast<size_t>(k)](selected[p].first,
                                                   selected[p].second);

  const FlatReduction flat = reduce_spectra(spectra, params.reduce);
  auto [labels, peaks] = phase2_flat(flat.colors, params);

  SegmentationMap out;
  out.labels = Eigen::MatrixXi::Zero(cube.rows, cube.cols); // 0 = outside
  for (size_t p = 0; p < selected.size(); ++p)
    out.labels(selected[p].first, selected[p].second) = labels[p];
  out.peaks = peaks.peaks;
  out.palette.resize(peaks.peaks.size());
  for (size_t k = 0; k < peaks.peaks.size(); ++k)
    out.palette[k] = palette_color(static_cast<int>(k) + 1);
  return out;
}

} // namespace diffuse
