#include "diffuse/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace diffuse::ref {

Matrix pairwise_sq_dist(const Matrix& data) {
  const Eigen::Index n = data.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < data.cols(); ++k) {
        const double diff = data(i, k) - data(j, k);
        s += diff * diff;
      }
      out(i, j) = s;
    }
  return out;
}

double kernel_sum(const Matrix& sq_dist, double epsilon) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < sq_dist.rows(); ++i)
    for (Eigen::Index j = 0; j < sq_dist.cols(); ++j)
      total += std::exp(-sq_dist(i, j) / (2.0 * epsilon));
  return total;
}

Matrix wav_image(const HyperCube& cube) {
  Matrix out = Matrix::Zero(cube.rows, cube.cols);
  for (int k = 0; k < cube.bands(); ++k)
    for (int i = 0; i < cube.rows; ++i)
      for (int j = 0; j < cube.cols; ++j)
        out(i, j) += cube.band_images[static_cast<size_t>(k)](i, j);
  return out / cube.bands();
}

int eta_exhaustive(const Matrix& P, const Vector& lambdas, const Matrix& nu,
                   const Matrix& mu, int time, double delta) {
  const Eigen::Index n = P.rows();
  Matrix Pt = Matrix::Identity(n, n);
  for (int s = 0; s < time; ++s) Pt = Pt * P;

  for (Eigen::Index eta = 1; eta <= n; ++eta) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double approx = 0.0;
        for (Eigen::Index k = 0; k < eta; ++k)
          approx += std::pow(lambdas(k), time) * nu(i, k) * mu(j, k);
        const double diff = Pt(i, j) - approx;
        sum += diff * diff;
      }
    if (std::sqrt(sum) < delta) return static_cast<int>(eta);
  }
  return static_cast<int>(n);
}

std::map<ColorTuple, long> histogram_counts(const std::vector<ColorTuple>& t) {
  std::map<ColorTuple, long> counts;
  for (const ColorTuple& tuple : t) counts[tuple] += 1;
  return counts;
}

std::vector<int> nearest_peak_labels(const std::vector<ColorTuple>& tuples,
                                     const std::vector<Peak>& peaks) {
  std::vector<int> labels;
  labels.reserve(tuples.size());
  for (const ColorTuple& c : tuples) {
    int best_label = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < peaks.size(); ++k) {
      double sq = 0.0;
      for (size_t m = 0; m < c.size(); ++m)
        sq += (peaks[k].color[m] - c[m]) * static_cast<double>(peaks[k].color[m] - c[m]);
      if (sq < best) {
        best = sq;
        best_label = static_cast<int>(k) + 1;
      }
    }
    labels.push_back(best_label);
  }
  return labels;
}

std::vector<Peak> peaks_by_scan(const std::map<ColorTuple, long>& counts,
                                int theta, int xi) {
  std::vector<std::pair<ColorTuple, long>> bins(counts.begin(), counts.end());
  std::vector<Peak> peaks;
  while (static_cast<int>(peaks.size()) < theta) {
    long best = 0;
    size_t at = bins.size();
    for (size_t b = 0; b < bins.size(); ++b)
      if (bins[b].second > best) {
        best = bins[b].second;
        at = b;
      }
    if (at == bins.size()) break;
    peaks.push_back({bins[at].first, best});
    for (auto& [color, count] : bins) {
      int linf = 0;
      for (size_t m = 0; m < color.size(); ++m)
        linf = std::max(linf, std::abs(color[m] - bins[at].first[m]));
      if (linf <= xi) count = 0;
    }
  }
  return peaks;
}

std::vector<SubPixelHit> detect_subpixel(const ReducedCube& ghat,
                                         const SubPixelParams& params) {
  std::vector<SubPixelHit> hits;
  for (int i = 0; i < ghat.rows; ++i) {
    for (int j = 0; j < ghat.cols; ++j) {
      std::vector<int> isolated;
      for (int k = 0; k < ghat.colors(); ++k) {
        const Matrix& layer = ghat.layers[static_cast<size_t>(k)];
        int exceed = 0;
        for (int m = i - params.alpha; m <= i + params.alpha; ++m) {
          for (int n = j - params.alpha; n <= j + params.alpha; ++n) {
            if (m < 0 || n < 0 || m >= ghat.rows || n >= ghat.cols) continue;
            if (std::abs(layer(i, j) - layer(m, n)) > params.tau1) ++exceed;
          }
        }
        if (exceed > params.tau2) isolated.push_back(k);
      }
      if (isolated.size() >= 2) hits.push_back({i, j, std::move(isolated)});
    }
  }
  return hits;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

} // namespace

Mask components_filter(const Mask& gray, const Mask& rgb) {
  const int rows = static_cast<int>(rgb.rows());
  const int cols = static_cast<int>(rgb.cols());
  UnionFind uf(rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (rgb(i, j) == 0) continue;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = i + di;
          const int nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= rows || nj >= cols) continue;
          if (rgb(ni, nj) != 0) uf.unite(i * cols + j, ni * cols + nj);
        }
    }

  std::vector<char> rooted(static_cast<size_t>(rows * cols), 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rgb(i, j) != 0 && gray(i, j) != 0)
        rooted[static_cast<size_t>(uf.find(i * cols + j))] = 1;

  Mask out = Mask::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rgb(i, j) != 0 && rooted[static_cast<size_t>(uf.find(i * cols + j))])
        out(i, j) = 1;
  return out;
}

namespace {

double slope(const std::vector<double>& h, int x) {
  const int lo = std::max(0, x - 1);
  const int hi = std::min(static_cast<int>(h.size()) - 1, x + 1);
  return (h[static_cast<size_t>(hi)] - h[static_cast<size_t>(lo)]) / 2.0;
}

} // namespace

int scan_threshold_gray(const std::vector<double>& h, double mu) {
  const int peak =
      static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
  for (int x = peak + 1; x < static_cast<int>(h.size()); ++x)
    if (std::abs(slope(h, x)) < mu) return x;
  return static_cast<int>(h.size()) - 1;
}

std::pair<int, int> scan_threshold_rgb(const std::vector<double>& h,
                                       double mu) {
  const int peak =
      static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
  int lo = -1;
  for (int y = peak - 1; y >= 0; --y)
    if (slope(h, y) < mu) {
      lo = y;
      break;
    }
  int hi = static_cast<int>(h.size());
  for (int x = peak + 1; x < static_cast<int>(h.size()); ++x)
    if (slope(h, x) > -mu) {
      hi = x;
      break;
    }
  return {lo, hi};
}

} // namespace diffuse::ref
