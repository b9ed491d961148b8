#include "diffuse/subpixel.hpp"

#include "diffuse/errors.hpp"

#include <bit>
#include <cmath>

namespace diffuse {

std::vector<SubPixelHit> detect_subpixel(const ReducedCube& ghat,
                                         const SubPixelParams& params) {
  if (params.alpha < 1) throw Error("InvalidInput", "alpha must be >= 1");
  if (params.tau1 <= 0.0) throw Error("InvalidInput", "tau1 must be positive");
  if (params.tau2 < 1) throw Error("InvalidInput", "tau2 must be >= 1");

  const int rows = ghat.rows;
  const int cols = ghat.cols;
  const int layers = ghat.colors();
  if (layers > 64)
    throw Error("InvalidInput", "more than 64 color layers unsupported");

  // isolation[p] gets bit k set when pixel p is isolated in layer k.
  std::vector<std::uint64_t> isolation(static_cast<size_t>(rows) * cols, 0);

  for (int k = 0; k < layers; ++k) {
    const Matrix& layer = ghat.layers[static_cast<size_t>(k)];
    const std::uint64_t bit = std::uint64_t{1} << k;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double center = layer(i, j);
        int exceed = 0;
        const int lo_i = std::max(0, i - params.alpha);
        const int hi_i = std::min(rows - 1, i + params.alpha);
        const int lo_j = std::max(0, j - params.alpha);
        const int hi_j = std::min(cols - 1, j + params.alpha);
        for (int m = lo_i; m <= hi_i; ++m)
          for (int n = lo_j; n <= hi_j; ++n)
            if (std::abs(center - layer(m, n)) > params.tau1) ++exceed;
        if (exceed > params.tau2)
          isolation[static_cast<size_t>(i) * cols + j] |= bit;
      }
    }
  }

  std::vector<SubPixelHit> hits;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const std::uint64_t mask = isolation[static_cast<size_t>(i) * cols + j];
      if (std::popcount(mask) < 2) continue;
      SubPixelHit hit;
      hit.row = i;
      hit.col = j;
      for (int k = 0; k < layers; ++k)
        if (mask & (std::uint64_t{1} << k)) hit.layers.push_back(k);
      hits.push_back(std::move(hit));
    }
  }
  return hits;
}

} // namespace diffuse
